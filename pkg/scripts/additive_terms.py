"""Compare the two ceiled additive terms for regular graphs over a range of degrees.

Row A: ceil(e log(d^2+1) + e).  Row B: ceil(5.437 log d + 2.721).
Prints every d where B < A (the shorthand would undercut the sharper bound) and
the range of the difference.
"""
import argparse

from chromadyn.harness import guarded_ceil, shorthand_consistency


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d-max", type=int, default=10_000)
    args = ap.parse_args()

    below = shorthand_consistency(args.d_max)
    diffs = []
    for d in range(3, args.d_max + 1):
        a, _ = guarded_ceil(lambda m: m.e * m.log(d * d + 1) + m.e)
        b, _ = guarded_ceil(lambda m: 5.437 * m.log(d) + 2.721)
        diffs.append(b - a)
    print(f"d in [3, {args.d_max}]: B - A ranges over [{min(diffs)}, {max(diffs)}]")
    print(f"degrees with B < A: {below if below else 'none'}")
    for d in (3, 7, 14, 20, 30, 100):
        if d <= args.d_max:
            a, _ = guarded_ceil(lambda m: m.e * m.log(d * d + 1) + m.e)
            print(f"  d={d:4d}  A={a}  B={a + diffs[d - 3]}")


if __name__ == "__main__":
    main()
