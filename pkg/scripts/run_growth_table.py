#!/usr/bin/env python3
"""Growth brackets and ratio estimates for the counting problems."""

import argparse
import time

from gridlab.counting import growth_bounds


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--problems", nargs="*",
                    default=["dom", "total", "minimal-dom", "minimal-total"])
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--min-n", type=int, default=5)
    args = ap.parse_args()

    for name in args.problems:
        cap = args.max_n if not name.startswith("minimal") else min(5, args.max_n)
        for n in range(max(3, args.min_n), cap + 1):
            t0 = time.time()
            br = growth_bounds(name, n)
            ratio = f"{br.ratio_estimate:.9f}" if br.ratio_estimate else "-"
            print(f"{name:14s} n={n:2d}: {br.lower:.9f} <= nu <= {br.upper:.9f}"
                  f"   ratio {ratio}   [{time.time() - t0:.1f}s]")


if __name__ == "__main__":
    main()
