"""Deterministic worker-pool helpers.

States are partitioned into contiguous blocks; workers return per-block CSR
pieces that are concatenated in block order, so the result is identical for
any worker count.  Workers inherit the state set via fork, no pickling.
"""

from __future__ import annotations

import multiprocessing as mp
import os

import numpy as np

from .errors import CapacityExceeded
from .states import MAX_PAIRS, successors_block

_WORK_SS = None


def default_threads() -> int:
    env = os.environ.get("GDL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _work_block(args):
    lo, hi = args
    indptr, cols = successors_block(_WORK_SS, lo, hi)
    return indptr, cols


def run_successors(ss, threads=None, pair_budget=MAX_PAIRS):
    """Successor CSR for the whole state set, optionally fork-parallel."""
    global _WORK_SS
    threads = threads if threads is not None else default_threads()
    n = len(ss)
    if threads <= 1 or n < 4096 or not hasattr(os, "fork"):
        indptr, cols = successors_block(ss, 0, n, pair_budget)
        if len(cols) > pair_budget:
            raise CapacityExceeded(f"{len(cols)} pairs exceed the budget")
        return indptr, cols

    nblocks = min(n, threads * 4)
    bounds = np.linspace(0, n, nblocks + 1, dtype=np.int64)
    blocks = [(int(bounds[i]), int(bounds[i + 1])) for i in range(nblocks)]
    ss.decoded()
    ss.index()
    _WORK_SS = ss
    try:
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=threads) as pool:
            pieces = pool.map(_work_block, blocks)
    finally:
        _WORK_SS = None
    cols = np.concatenate([p[1] for p in pieces]) if pieces else np.empty(0, np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    offset = 0
    pos = 0
    for (lo, hi), (iptr, pc) in zip(blocks, pieces):
        indptr[lo + 1:hi + 1] = iptr[1:] + offset
        offset += len(pc)
        pos = hi
    if len(cols) > pair_budget:
        raise CapacityExceeded(f"{len(cols)} pairs exceed the budget")
    return indptr, cols
