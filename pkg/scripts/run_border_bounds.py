#!/usr/bin/env python3
"""Loss-method lower bounds against the closed formulas on a grid sweep."""

import argparse

from gridlab.loss import build_band, extended_lower_bound, lower_bound
from gridlab.solver import reference_formula


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--problem", default="2dom")
    ap.add_argument("--height", type=int, default=6)
    ap.add_argument("--lo", type=int, default=13)
    ap.add_argument("--hi", type=int, default=25)
    args = ap.parse_args()

    bs = build_band(args.problem, args.height)
    rec = bs.recurrence()
    print(f"band: {bs.dim} states; T_a^(e+{rec.period}) = T_a^e + {rec.increment} "
          f"for e >= {rec.start}")
    mismatch = 0
    for n in range(args.lo, args.hi + 1):
        row = []
        for m in range(n, args.hi + 1):
            got = lower_bound(args.problem, n, m, args.height)
            try:
                want = reference_formula(args.problem, n, m)
                flag = "" if got == want else "*"
                mismatch += got != want
            except Exception:
                flag = "?"
            row.append(f"{got}{flag}")
        print(f"n={n:2d}: " + " ".join(row))
    print(f"mismatches vs closed formulas: {mismatch}")
    big = extended_lower_bound(args.problem, 100, 100, args.height)
    print(f"extended bound at 100x100: {big}")


if __name__ == "__main__":
    main()
