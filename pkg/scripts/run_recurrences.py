#!/usr/bin/env python3
"""Detect the fixed-height 2-domination recurrences, with timings."""

import argparse
import time

from gridlab.problems import get_problem
from gridlab.solver import build_system, find_recurrence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--problem", default="2dom")
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    spec = get_problem(args.problem)
    for n in range(1, args.max_n + 1):
        t0 = time.time()
        sys_ = build_system(spec, n, prune_symmetry=True, threads=args.threads)
        rec = find_recurrence(spec, n, system=sys_)
        print(
            f"n={n:2d}: gamma(n, m+{rec.period}) = gamma(n, m) + {rec.increment}"
            f"  for m >= {rec.start}   "
            f"[{len(sys_.states)} states, {sys_.pair_count} pairs, "
            f"{time.time() - t0:.1f}s]"
        )


if __name__ == "__main__":
    main()
