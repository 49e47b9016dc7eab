"""Run every constructive pipeline on one random regular graph and print its JSON record summary."""
import argparse

from chromadyn import generators
from chromadyn.exact import chromatic_number
from chromadyn.graphcore import degree_stats
from chromadyn.lll import (
    dynamic_coloring_general,
    dynamic_coloring_regular,
    max_partition_r,
    product_r_dynamic,
    r_dynamic_partition_coloring,
)
from chromadyn.transversal import square_bound_coloring


def show(name, colors, bound, valid, extra=""):
    print(f"{name:22s} colors={colors:3d} bound={bound:3d} valid={valid} {extra}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=120)
    ap.add_argument("--d", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--planted", action="store_true",
                    help="bipartite graph with a planted base coloring, so the D-set step has work to do")
    args = ap.parse_args()

    if args.planted:
        G = generators.random_bipartite_regular(args.n // 2, args.d, args.seed)
        base = generators.planted_bad_coloring(G, args.seed, max_bad=max(1, args.n // (4 * args.d)), spread=2)
    else:
        G = generators.random_regular(args.n, args.d, args.seed)
        base = None
    prof = degree_stats(G)
    print(f"n={G.n} m={G.m} d={prof.d}")

    res = product_r_dynamic(G, 2, args.seed)
    show("product (r=2)", res.colors_used, 2 * res.k_base, res.valid, f"rounds={res.rounds}")
    res = dynamic_coloring_regular(G, args.seed, base=base)
    show("regular", res.colors_used, res.k_base + res.additive_budget, res.valid,
         f"route={res.route} |D|={len(res.details.get('D', []))} rounds={res.rounds}")
    res = dynamic_coloring_general(G, args.seed, base=base)
    show("general", res.colors_used, res.k_base + res.additive_budget, res.valid, f"route={res.route}")
    for r in range(2, max_partition_r(prof.delta, prof.Delta) + 1):
        res = r_dynamic_partition_coloring(G, r, args.seed)
        show(f"partition (r={r})", res.colors_used, res.k_base + res.additive_budget, res.valid,
             f"parts={res.details['parts']}")
    if G.n <= 60:
        c = chromatic_number(G, 100_000).witness
        res = square_bound_coloring(G, c, args.seed)
        show("square", res.colors_used, res.bound, res.valid, f"k={res.k} l={res.l}")


if __name__ == "__main__":
    main()
