"""Command-line entry point: ``chromadyn {gen,exact,construct,bounds,scan}``."""
from __future__ import annotations

import argparse
import json
import sys

from . import generators
from .colorings import Coloring
from .exact import DEFAULT_BUDGET, chromatic_number, r_dynamic_number
from .graphcore import format_for_path, parse, serialize
from .harness import (
    bound_table,
    enforced_failures,
    load_corpus_dir,
    montgomery_scan,
    run_construction,
    seed_from_env,
    small_corpus,
    verify_instance,
)

METHODS = ("delta3", "product", "dynam1", "general", "partition", "square")


def _read_graph(path: str, fmt: str | None):
    with open(path, "rb") as fh:
        return parse(fmt or format_for_path(path), fh.read())


def _emit(payload, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_gen(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("d", args.d), ("a", args.a), ("b", args.b), ("k", args.k),
                                ("p", args.p), ("leaves", args.leaves), ("side", args.side)) if v is not None}
    if args.family in ("random_regular", "random_graph", "random_bipartite_regular"):
        params["seed"] = args.seed
    G = generators.generate(args.family, **params)
    fmt = args.format or format_for_path(args.out or "")
    data = serialize(fmt, G)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())
    return 0


def cmd_exact(args) -> int:
    G = _read_graph(args.inp, args.format)
    chi = chromatic_number(G, args.budget)
    res = r_dynamic_number(G, args.r, args.budget, chi=chi)
    _emit({"n": G.n, "m": G.m, "r": args.r, "chi": chi.describe(), "chi_r": res.describe(),
           "witness": list(res.witness.colors), "nodes": res.nodes}, args.out)
    return 0


def cmd_construct(args) -> int:
    G = _read_graph(args.inp, args.format)
    rec = run_construction(G, args.method, args.r, args.seed, args.budget)
    if args.coloring_out and "coloring" in rec:
        with open(args.coloring_out, "w") as fh:
            fh.write(Coloring(rec["coloring"]).to_lines())
    _emit(rec, args.out)
    return 1 if rec.get("error") or not rec.get("valid") else 0


def cmd_bounds(args) -> int:
    G = _read_graph(args.inp, args.format)
    methods = None if args.construct == "all" else [m for m in args.construct.split(",") if m]
    report = bound_table(G, args.r, args.budget, args.seed, args.graph_id or args.inp, methods)
    verdicts = verify_instance(G, args.r, report)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.to_csv())
    payload = report.to_dict()
    payload["verdicts"] = [v.__dict__ for v in verdicts]
    _emit(payload, args.out)
    if not args.quiet:
        for v in verdicts:
            print(f"{v.row:40s} {v.status:20s} {v.detail}", file=sys.stderr)
    return 1 if enforced_failures(verdicts) else 0


def cmd_scan(args) -> int:
    corpus = small_corpus(args.seed) if args.builtin else load_corpus_dir(args.corpus)
    report = montgomery_scan(corpus, args.budget, args.seed, args.jobs)
    _emit(report, args.out)
    print(f"scanned {len(report['entries'])}, skipped {len(report['skipped'])}, "
          f"gap histogram {report['histogram']}, findings {len(report['findings'])}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_seed = seed_from_env()
    ap = argparse.ArgumentParser(prog="chromadyn", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph_in=True):
        if graph_in:
            p.add_argument("--in", dest="inp", required=True, help="graph file (.g6 or .col)")
            p.add_argument("--format", choices=("graph6", "dimacs"))
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node budget")
        p.add_argument("--seed", type=int, default=default_seed, help="default: $CHROMADYN_SEED or 0")
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("--family", required=True, choices=sorted(generators.FAMILIES))
    for name in ("n", "d", "a", "b", "k", "leaves", "side"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--format", choices=("graph6", "dimacs"))
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact", help="exact chi and chi_r")
    common(p)
    p.add_argument("--r", type=int, default=2)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("construct", help="run one constructive pipeline")
    common(p)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--coloring-out", help="also write the coloring as 's v c' lines")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bounds", help="bound table and conformance verdicts")
    common(p)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--csv", help="write the flattened rows as CSV")
    p.add_argument("--construct", default="", help="comma-separated methods, or 'all'")
    p.add_argument("--graph-id")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scan", help="chi_2 - chi gaps over a corpus of regular graphs")
    common(p, graph_in=False)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="directory of .g6/.col files")
    src.add_argument("--builtin", action="store_true", help="use the built-in small corpus")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
