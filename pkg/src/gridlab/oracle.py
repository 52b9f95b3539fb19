"""Brute-force ground truth on tiny grids.

Everything here works from the global definitions of the dominating-set
variants (never from column-state rules), enumerating stone configurations
directly; numpy only vectorizes the enumeration.  Caps keep the search spaces
at or below 2^20 configurations.
"""

from __future__ import annotations

import numpy as np

from .errors import TooLarge, UnsupportedProblem

_SUBSET_CAP = 1 << 20


def _popcount(arr):
    x = arr.astype(np.int64)
    out = np.zeros_like(x)
    while True:
        out += x & 1
        x >>= 1
        if not x.any():
            break
    return out


def _neighbour_masks(n, m):
    masks = []
    for r in range(n):
        for c in range(m):
            mask = 0
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < n and 0 <= cc < m:
                    mask |= 1 << (rr * m + cc)
            masks.append(mask)
    return masks


def _ball2_masks(n, m):
    masks = []
    for r in range(n):
        for c in range(m):
            mask = 0
            for dr in range(-2, 3):
                for dc in range(-2, 3):
                    if abs(dr) + abs(dc) > 2 or (dr == 0 and dc == 0):
                        continue
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < n and 0 <= cc < m:
                        mask |= 1 << (rr * m + cc)
            masks.append(mask)
    return masks


def _subsets(nm):
    if (1 << nm) > _SUBSET_CAP:
        raise TooLarge(f"2^{nm} configurations exceed the oracle cap")
    return np.arange(1 << nm, dtype=np.int64)


def _count_in(sets, mask):
    cnt = np.zeros(len(sets), dtype=np.int8)
    b = 0
    while mask >> b:
        if (mask >> b) & 1:
            cnt += ((sets >> b) & 1).astype(np.int8)
        b += 1
    return cnt


def _ab_valid(sets, n, m, a, b, masks=None):
    masks = masks or _neighbour_masks(n, m)
    ok = np.ones(len(sets), dtype=bool)
    for idx in range(n * m):
        in_s = ((sets >> idx) & 1).astype(bool)
        cnt = _count_in(sets, masks[idx])
        ok &= np.where(in_s, cnt >= a, cnt >= b)
    return ok


def _dist2_valid(sets, n, m):
    masks = _ball2_masks(n, m)
    ok = np.ones(len(sets), dtype=bool)
    for idx in range(n * m):
        in_s = ((sets >> idx) & 1).astype(bool)
        cnt = _count_in(sets, masks[idx])
        ok &= in_s | (cnt >= 1)
    return ok


def _minimal_valid(sets, n, m, total):
    masks = _neighbour_masks(n, m)
    nm = n * m
    cnt = [None] * nm
    for idx in range(nm):
        cnt[idx] = _count_in(sets, masks[idx])
    a = 1 if total else 0
    ok = _ab_valid(sets, n, m, a, 1, masks)
    for v in range(nm):
        in_s = ((sets >> v) & 1).astype(bool)
        good = np.zeros(len(sets), dtype=bool)
        if not total:
            good |= cnt[v] == 0  # isolated dominant vertex
        for w in range(nm):
            if not (masks[v] >> w) & 1:
                continue
            priv = cnt[w] == 1
            if not total:
                priv &= ~((sets >> w) & 1).astype(bool)
            good |= priv
        ok &= ~in_s | good
    return ok


def _roman_bad_cells(s2_sets, n, m):
    """Per configuration of two-stone cells, the cells needing a single stone."""
    masks = _neighbour_masks(n, m)
    nm = n * m
    undom = np.zeros(len(s2_sets), dtype=np.int64)
    sizes = np.zeros(len(s2_sets), dtype=np.int16)
    for idx in range(nm):
        in_s2 = ((s2_sets >> idx) & 1).astype(bool)
        cnt = _count_in(s2_sets, masks[idx])
        bad = ~in_s2 & (cnt == 0)
        undom |= bad.astype(np.int64) << idx
        sizes += bad
    return undom, sizes


def brute_min_cost(problem: str, n: int, m: int):
    """Minimum cost over all assignments meeting the global definition.

    Returns None when the problem is infeasible on this grid.
    """
    nm = n * m
    if problem in ("roman", "roman-unopt"):
        sets = _subsets(nm)
        _, s1_sizes = _roman_bad_cells(sets, n, m)
        costs = 2 * _popcount(sets) + s1_sizes
        return int(costs.min())
    sets = _subsets(nm)
    if problem == "dom":
        ok = _ab_valid(sets, n, m, 0, 1)
    elif problem == "2dom":
        ok = _ab_valid(sets, n, m, 0, 2)
    elif problem == "total":
        ok = _ab_valid(sets, n, m, 1, 1)
    elif problem.startswith("ab:"):
        a, b = (int(x) for x in problem[3:].split(","))
        ok = _ab_valid(sets, n, m, a, b)
    elif problem == "dist2":
        ok = _dist2_valid(sets, n, m)
    elif problem == "minimal-dom":
        ok = _minimal_valid(sets, n, m, total=False)
    elif problem == "minimal-total":
        ok = _minimal_valid(sets, n, m, total=True)
    else:
        raise UnsupportedProblem(problem)
    if not ok.any():
        return None
    return int(_popcount(sets[ok]).min())


def brute_count(problem: str, n: int, m: int) -> int:
    """Exact number of assignments meeting the global definition."""
    nm = n * m
    if problem in ("roman", "roman-unopt"):
        sets = _subsets(nm)
        undom, _ = _roman_bad_cells(sets, n, m)
        # single stones: must cover every undominated cell, free elsewhere
        free = nm - _popcount(sets) - _popcount(undom & ~sets)
        total = 0
        for f, c in zip(*np.unique(free, return_counts=True)):
            total += int(c) << int(f)
        return total
    sets = _subsets(nm)
    if problem == "dom":
        ok = _ab_valid(sets, n, m, 0, 1)
    elif problem == "2dom":
        ok = _ab_valid(sets, n, m, 0, 2)
    elif problem == "total":
        ok = _ab_valid(sets, n, m, 1, 1)
    elif problem.startswith("ab:"):
        a, b = (int(x) for x in problem[3:].split(","))
        ok = _ab_valid(sets, n, m, a, b)
    elif problem == "dist2":
        ok = _dist2_valid(sets, n, m)
    elif problem == "minimal-dom":
        ok = _minimal_valid(sets, n, m, total=False)
    elif problem == "minimal-total":
        ok = _minimal_valid(sets, n, m, total=True)
    else:
        raise UnsupportedProblem(problem)
    return int(ok.sum())


# ---------------------------------------------------------------------------
# Band loss (relaxed top row), by direct per-cell summation
# ---------------------------------------------------------------------------


def _band_received(x, h, length, cell):
    i, j = cell
    got = 0
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ii, jj = i + di, j + dj
        if 0 <= ii < h and 0 <= jj < length:
            got += (x >> (ii * length + jj)) & 1
    return got


def brute_band_loss(problem: str, h: int, length: int):
    """Minimum per-cell loss sum over band fillings under the relaxed rules.

    The band's top row (index 0) may keep one unmet need (its neighbour above
    lies outside); the last column may likewise keep one per cell.  Cells on
    the outer row h-1 sit on the grid border.  Returns the scaled loss.
    """
    cells = h * length
    if problem in ("roman", "roman-unopt"):
        return _brute_band_loss_roman(h, length)
    if problem == "2dom":
        a, b = 0, 2
    elif problem == "dom":
        a, b = 0, 1
    elif problem == "total":
        a, b = 1, 1
    elif problem.startswith("ab:"):
        a, b = (int(x) for x in problem[3:].split(","))
    else:
        raise UnsupportedProblem(problem)
    if (1 << cells) > _SUBSET_CAP:
        raise TooLarge("band too large for brute force")
    best = None
    for x in range(1 << cells):
        loss = 0
        ok = True
        for i in range(h):
            for j in range(length):
                stone = (x >> (i * length + j)) & 1
                got = _band_received(x, h, length, (i, j))
                req = a if stone else b
                pend = max(0, req - got)
                slack = (1 if i == 0 else 0) + (1 if j == length - 1 else 0)
                if pend > slack:
                    ok = False
                    break
                loss += max(0, got - req)
                if stone and i == h - 1:
                    loss += 1
            if not ok:
                break
        if ok and (best is None or loss < best):
            best = loss
    return best


def _brute_band_loss_roman(h, length):
    cells = h * length
    if 3 ** cells > 1 << 22:
        raise TooLarge("roman band too large for brute force")
    best = None
    coords = [(i, j) for i in range(h) for j in range(length)]

    def nbrs(i, j):
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ii, jj = i + di, j + dj
            if 0 <= ii < h and 0 <= jj < length:
                yield ii, jj

    grid = {}

    def rec(k):
        nonlocal best
        if k == cells:
            loss = 0
            for (i, j) in coords:
                v = grid[i, j]
                got = sum(1 for w in nbrs(i, j) if grid[w] == 2)
                if v == 0:
                    pend = max(0, 1 - got)
                    slack = (1 if i == 0 else 0) + (1 if j == length - 1 else 0)
                    if pend > slack:
                        return
                    loss += 2 * max(0, got - 1)
                elif v == 1:
                    loss += 3 + 2 * got
                else:
                    loss += 2 * got + (2 if i == h - 1 else 0)
            if best is None or loss < best:
                best = loss
            return
        i, j = coords[k]
        for v in (0, 1, 2):
            # optimized rules: a single stone never touches another stone
            if v == 1 and any(grid.get(w, 0) in (1, 2) for w in nbrs(i, j)):
                continue
            if v in (1, 2) and any(grid.get(w, 0) == 1 for w in nbrs(i, j)):
                continue
            grid[i, j] = v
            rec(k + 1)
        grid.pop((i, j), None)

    rec(0)
    return best
