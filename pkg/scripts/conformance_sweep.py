"""Bound table over the built-in small corpus; prints a status histogram and any enforced failure."""
import argparse
import json
import time
from collections import Counter

from chromadyn.harness import bound_table, enforced_failures, montgomery_scan, small_corpus, verify_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=1_000_000)
    ap.add_argument("--no-construct", action="store_true", help="skip the constructive pipelines")
    ap.add_argument("--out", help="write per-graph conformance as JSON lines")
    args = ap.parse_args()

    corpus = small_corpus(args.seed)
    tally = Counter()
    failures = []
    t0 = time.perf_counter()
    out = open(args.out, "w") if args.out else None
    for entry in corpus:
        report = bound_table(entry.graph, 2, args.budget, args.seed, entry.graph_id,
                             () if args.no_construct else None)
        verdicts = verify_instance(entry.graph, 2, report)
        for v in verdicts:
            tally[(v.row.split("[")[0], v.status)] += 1
        failures += [(entry.graph_id, v) for v in enforced_failures(verdicts)]
        if out:
            out.write(json.dumps({"graph_id": entry.graph_id, "exact": report.exact,
                                  "conformance": report.conformance}, sort_keys=True) + "\n")
    if out:
        out.close()

    for (row, status), count in sorted(tally.items()):
        print(f"{row:32s} {status:20s} {count}")
    scan = montgomery_scan(corpus, args.budget, args.seed)
    print(f"\n{len(corpus)} graphs in {time.perf_counter() - t0:.1f}s")
    print(f"chi_2 - chi gaps: {scan['histogram']}, findings: {len(scan['findings'])}")
    print(f"enforced failures: {len(failures)}")
    for gid, v in failures:
        print(f"  {gid}: {v.row} {v.detail} {json.dumps(v.bundle)}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
