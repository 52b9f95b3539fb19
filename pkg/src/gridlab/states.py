"""Column-state enumeration, compatibility and successor construction.

States are bit-packed columns (row 0 in the most significant bits, so packed
order equals lexicographic row order).  Enumeration is a DFS that checks each
radius-bounded rule as soon as its window is complete, so invalid prefixes are
cut early.  For the hot problems the per-row checks are compiled into small
boolean lookup tables.
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityExceeded
from .problems import BND, INTERIOR, LOSS_BAND, MinimalRules, ProblemSpec

MAX_STATES = 4_000_000
MAX_PAIRS = 80_000_000

CACHE_MAGIC = b"GDL1"


def pack_values(vals, bits):
    acc = 0
    for v in vals:
        acc = (acc << bits) | v
    return acc


def unpack_values(packed, h, bits):
    mask = (1 << bits) - 1
    out = [0] * h
    for i in range(h - 1, -1, -1):
        out[i] = packed & mask
        packed >>= bits
    return tuple(out)


def reflect_packed(packed, h, bits):
    return pack_values(unpack_values(packed, h, bits)[::-1], bits)


@dataclass
class StateSet:
    """Ordered set of valid column states for (problem, height, mode)."""

    spec: ProblemSpec
    height: int
    mode: str
    pruned_by_symmetry: bool
    packed: np.ndarray            # int64, ascending
    ktags: np.ndarray | None = None  # minimal variants: virtual-prefix count
    _index: dict = field(default=None, repr=False)
    _decoded: list = field(default=None, repr=False)

    def __len__(self):
        return len(self.packed)

    @property
    def bits(self):
        nv = self.spec.rules.nvalues(self.mode)
        return max(1, (nv - 1).bit_length())

    def index(self):
        if self._index is None:
            self._index = {int(p): i for i, p in enumerate(self.packed)}
        return self._index

    def decoded(self):
        if self._decoded is None:
            b = self.bits
            h = self.height
            if self.ktags is None:
                self._decoded = [unpack_values(int(p), h, b) for p in self.packed]
            else:
                self._decoded = [
                    unpack_values(int(p) & ((1 << (b * h)) - 1), h, b)
                    for p in self.packed
                ]
        return self._decoded

    def reflect(self, idx):
        b, h = self.bits, self.height
        p = int(self.packed[idx])
        if self.ktags is not None:
            mask = (1 << (b * h)) - 1
            k = p >> (b * h)
            return (k << (b * h)) | reflect_packed(p & mask, h, b)
        return reflect_packed(p, h, b)


def reflect_state(spec, packed, h, mode=INTERIOR):
    nv = spec.rules.nvalues(mode)
    bits = max(1, (nv - 1).bit_length())
    return reflect_packed(packed, h, bits)


def canonical_state(spec, packed, h, mode=INTERIOR):
    return min(packed, reflect_state(spec, packed, h, mode))


# ---------------------------------------------------------------------------
# Rule tables (radius-1 columnar problems)
# ---------------------------------------------------------------------------


class _Tables:
    """Boolean lookup tables for one (rules, mode); missing rows map to slot NV."""

    def __init__(self, rules, mode):
        self.rules = rules
        self.mode = mode
        nv = rules.nvalues(mode)
        self.nv = nv
        k = nv + 1
        self.k = k

        def probe(fn):
            t = np.zeros(k * k * k, dtype=bool)
            for vm in range(k):
                for v in range(nv):
                    for vp in range(k):
                        a = BND if vm == nv else vm
                        c = BND if vp == nv else vp
                        t[(vm * k + v) * k + vp] = fn(a, v, c)
            return t

        self.valid = probe(lambda a, v, c: rules.row_ok(a, v, c, 0, mode, False))
        self.first = probe(lambda a, v, c: rules.row_ok(a, v, c, 0, mode, True))
        self.pair = np.zeros(nv * k * k * k, dtype=bool)
        for s in range(nv):
            for tm in range(k):
                for t in range(nv):
                    for tp in range(k):
                        a = BND if tm == nv else tm
                        c = BND if tp == nv else tp
                        ok = rules.pair_ok(s, a, t, c, 0, mode) and rules.row_ok(
                            a, t, c, 0, mode, False
                        )
                        self.pair[((s * k + tm) * k + t) * k + tp] = ok
        self.end = np.array(
            [rules.end_ok(v) for v in range(nv)], dtype=bool
        )


_TABLE_CACHE: dict = {}


def _tables(rules, mode):
    key = (id(rules), mode)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = _Tables(rules, mode)
    return _TABLE_CACHE[key]


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _enumerate_radius1(rules, h, mode, budget):
    tab = _tables(rules, mode)
    nv, k = tab.nv, tab.k
    valid = tab.valid
    out = []
    vals = [0] * h

    def rec(i, prev2, prev1):
        if i == h:
            if valid[(prev2 * k + prev1) * k + nv]:
                out.append(pack_values(vals, max(1, (nv - 1).bit_length())))
                if len(out) > budget:
                    raise CapacityExceeded(f"more than {budget} states")
            return
        for v in range(nv):
            if i == 0 or valid[(prev2 * k + prev1) * k + v]:
                vals[i] = v
                rec(i + 1, prev1, v)

    rec(0, nv, nv)
    return out


def _enumerate_radius2(rules, h, mode, budget):
    out = []
    vals = [0] * h
    bits = max(1, (rules.nvalues(mode) - 1).bit_length())

    def at(i):
        return vals[i] if 0 <= i < h else BND

    def centre_ok(c, upto):
        vm2 = vals[c - 2] if c - 2 >= 0 else BND
        vm1 = vals[c - 1] if c - 1 >= 0 else BND
        vp1 = vals[c + 1] if c + 1 <= upto else BND
        vp2 = vals[c + 2] if c + 2 <= upto else BND
        return rules.row_ok2(vm2, vm1, vals[c], vp1, vp2, h, mode, False)

    def rec(i):
        if i == h:
            for c in range(max(0, h - 2), h):
                if not centre_ok(c, h - 1):
                    return
            out.append(pack_values(vals, bits))
            if len(out) > budget:
                raise CapacityExceeded(f"more than {budget} states")
            return
        for v in range(rules.nvalues(mode)):
            vals[i] = v
            if i >= 2 and not centre_ok(i - 2, i):
                continue
            rec(i + 1)

    rec(0)
    return out


def _enumerate_minimal(rules: MinimalRules, h, budget):
    """All (window, k) states: per-row 4-bit values, virtual-prefix tag k."""
    out = []
    vals = [0] * h

    def rec(i, domain, k):
        if i == h:
            if rules.intra_ok(vals, k):
                out.append((pack_values(vals, 4), k))
                if len(out) > budget:
                    raise CapacityExceeded(f"more than {budget} states")
            return
        for v in domain:
            vals[i] = v
            # domination of rows already fully surrounded is checked at the
            # end via intra_ok; heights here stay small, no prefix cut needed
            rec(i + 1, domain, k)

    for k in (0, 1, 2, 3):
        rec(0, _minimal_domain(k), k)
    return out


def _minimal_domain(k):
    """Row values whose k oldest planes (A first) are zero."""
    out = []
    for v in range(16):
        a, b, c = (v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1
        if k >= 1 and a:
            continue
        if k >= 2 and b:
            continue
        if k >= 3 and c:
            continue
        out.append(v)
    return out


def enumerate_states(
    spec: ProblemSpec,
    height: int,
    mode: str = INTERIOR,
    prune_symmetry: bool = False,
    budget: int = MAX_STATES,
    cache_dir: str | None = None,
) -> StateSet:
    """All valid column states, in canonical (packed ascending) order."""
    rules = spec.rules
    if isinstance(rules, MinimalRules):
        bits = 4
    else:
        bits = max(1, (rules.nvalues(mode) - 1).bit_length())
    if bits * height > 62:
        raise CapacityExceeded(f"height {height} exceeds packing capacity")

    cached = _cache_load(spec, height, mode, prune_symmetry, cache_dir)
    if cached is not None:
        return cached

    if isinstance(rules, MinimalRules):
        pairs = _enumerate_minimal(rules, height, budget)
        shift = 4 * height
        tagged = [(k << shift) | p for p, k in pairs]
        if prune_symmetry:
            keep = []
            for t, (p, k) in zip(tagged, pairs):
                r = (k << shift) | reflect_packed(p, height, 4)
                if t <= r:
                    keep.append(t)
            tagged = keep
        tagged.sort()
        packed = np.array(tagged, dtype=np.int64)
        ktags = (packed >> shift).astype(np.int8)
        ss = StateSet(spec, height, mode, prune_symmetry, packed, ktags)
    else:
        if rules.vradius == 1:
            plist = _enumerate_radius1(rules, height, mode, budget)
        else:
            plist = _enumerate_radius2(rules, height, mode, budget)
        if prune_symmetry:
            plist = [
                p for p in plist if p <= reflect_packed(p, height, bits)
            ]
        packed = np.array(sorted(plist), dtype=np.int64)
        ss = StateSet(spec, height, mode, prune_symmetry, packed)

    _cache_store(ss, cache_dir)
    return ss


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def is_compatible(spec, s_vals, t_vals, h, mode=INTERIOR):
    """True iff column state t may directly follow s in a valid filling."""
    rules = spec.rules
    if isinstance(rules, MinimalRules):
        raise NotImplementedError("windowed problems use successor buckets")
    if rules.vradius == 1:
        for c in range(h):
            tm = t_vals[c - 1] if c > 0 else BND
            tp = t_vals[c + 1] if c + 1 < h else BND
            if not rules.pair_ok(s_vals[c], tm, t_vals[c], tp, h, mode):
                return False
            if not rules.row_ok(tm, t_vals[c], tp, h, mode, False):
                return False
        return True
    for c in range(h):
        sm = s_vals[c - 1] if c > 0 else BND
        sp = s_vals[c + 1] if c + 1 < h else BND
        win = [t_vals[c + d] if 0 <= c + d < h else BND for d in (-2, -1, 0, 1, 2)]
        if not rules.pair_ok2(sm, s_vals[c], sp, *win, h, mode):
            return False
        if not rules.row_ok2(win[0], win[1], win[2], win[3], win[4], h, mode, False):
            return False
    return True


def is_first(spec, vals, h, mode=INTERIOR):
    rules = spec.rules
    if isinstance(rules, MinimalRules):
        raise NotImplementedError("use StateSet ktags for windowed problems")
    if mode != INTERIOR:
        raise ValueError("first states are defined for interior mode only")
    if rules.vradius == 1:
        for c in range(h):
            vm = vals[c - 1] if c > 0 else BND
            vp = vals[c + 1] if c + 1 < h else BND
            if not rules.row_ok(vm, vals[c], vp, h, mode, True):
                return False
        return True
    for c in range(h):
        win = [vals[c + d] if 0 <= c + d < h else BND for d in (-2, -1, 0, 1, 2)]
        if not rules.row_ok2(win[0], win[1], win[2], win[3], win[4], h, mode, True):
            return False
    return True


def is_end(spec, vals, h, mode=INTERIOR):
    rules = spec.rules
    if isinstance(rules, MinimalRules):
        raise NotImplementedError("use end flags on the StateSet")
    return all(rules.end_ok(v) for v in vals)


def state_flags(ss: StateSet):
    """(first, end, cost) arrays for every state of the set."""
    rules = ss.spec.rules
    h = ss.height
    n = len(ss)
    first = np.zeros(n, dtype=bool)
    end = np.zeros(n, dtype=bool)
    cost = np.zeros(n, dtype=np.int64)
    if isinstance(rules, MinimalRules):
        dec = ss.decoded()
        for i in range(n):
            vals = dec[i]
            k = int(ss.ktags[i])
            first[i] = k == 3
            end[i] = rules.end_ok(list(vals), k)
            cost[i] = sum(v & 1 for v in vals)
        return first, end, cost
    costs = np.array([cv.cost for cv in rules.values(ss.mode)], dtype=np.int64)
    dec = ss.decoded()
    for i in range(n):
        vals = dec[i]
        cost[i] = int(costs[list(vals)].sum())
        end[i] = all(rules.end_ok(v) for v in vals)
        if ss.mode == INTERIOR:
            first[i] = is_first(ss.spec, vals, h, ss.mode)
    return first, end, cost


# ---------------------------------------------------------------------------
# Successors
# ---------------------------------------------------------------------------


def successor_candidates(ss: StateSet, idx: int):
    """Candidate successor indices (a superset of the true successors).

    Window problems shift their recorded history one column; the candidates
    are the states whose history matches.  Radius-1 problems have no history,
    so every state is a candidate.
    """
    rules = ss.spec.rules
    if isinstance(rules, MinimalRules):
        return _minimal_candidates(ss, idx)
    if getattr(rules, "window", 1) >= 2:
        # dist2: successor prev-flags must equal our stone pattern
        buckets = _dist2_buckets(ss)
        vals = ss.decoded()[idx]
        key = tuple(1 if rules.stone[v] else 0 for v in vals)
        return buckets.get(key, [])
    return list(range(len(ss)))


def _dist2_buckets(ss):
    cachekey = "_d2buckets"
    if getattr(ss, cachekey, None) is None:
        rules = ss.spec.rules
        buckets = {}
        for i, vals in enumerate(ss.decoded()):
            key = tuple(1 if rules.prev[v] else 0 for v in vals)
            buckets.setdefault(key, []).append(i)
        object.__setattr__(ss, cachekey, buckets)
    return getattr(ss, cachekey)


def _minimal_candidates(ss, idx):
    vals = ss.decoded()[idx]
    k = int(ss.ktags[idx])
    kt = max(0, k - 1)
    h = ss.height
    shift = 4 * h
    index = ss.index()
    base = [((v << 1) & 0b1110) for v in vals]
    out = []
    for e in range(1 << h):
        tvals = [base[i] | ((e >> i) & 1) for i in range(h)]
        packed = (kt << shift) | pack_values(tvals, 4)
        j = index.get(packed)
        if j is not None:
            out.append(j)
    return out


def successors_block(ss: StateSet, lo: int, hi: int, pair_budget=MAX_PAIRS):
    """Successor lists (relative CSR) for states lo..hi-1, deterministic order."""
    from .problems import ABRules

    rules = ss.spec.rules
    if isinstance(rules, MinimalRules):
        return _succ_minimal(ss, lo, hi)
    if rules.vradius == 2:
        if not ss.pruned_by_symmetry and ss.mode == INTERIOR:
            return _succ_dist2_fast(ss, lo, hi)
        return _succ_radius2(ss, lo, hi)
    if (isinstance(rules, ABRules) and ss.mode == INTERIOR
            and not ss.pruned_by_symmetry and ss.height <= 14
            and rules.a <= 1):
        return _succ_ab_fast(ss, lo, hi)
    return _succ_radius1(ss, lo, hi, pair_budget)


def _ab_planes(ss):
    """(stone, deficit1) bit planes per state for the (a, b) family."""
    if getattr(ss, "_abplanes", None) is None:
        rules = ss.spec.rules
        h = ss.height
        bits = ss.bits
        packed = ss.packed
        stone_ids = {v.id for v in rules.values(ss.mode) if rules.stone[v.id]}
        d1_ids = {v.id for v in rules.values(ss.mode) if rules.deficit[v.id] == 1}
        st = np.zeros(len(ss), dtype=np.int64)
        d1 = np.zeros(len(ss), dtype=np.int64)
        mask = (1 << bits) - 1
        for r in range(h):
            v = (packed >> (bits * (h - 1 - r))) & mask
            bit = np.int64(1) << r
            stmask = np.zeros(len(ss), dtype=bool)
            d1mask = np.zeros(len(ss), dtype=bool)
            for sid in stone_ids:
                stmask |= v == sid
            for did in d1_ids:
                d1mask |= v == did
            st |= np.where(stmask, bit, 0)
            d1 |= np.where(d1mask, bit, 0)
        object.__setattr__(ss, "_abplanes", (st, d1))
    return getattr(ss, "_abplanes")


def _succ_ab_fast(ss, lo, hi):
    """Vectorized (a, b)-family successors over all 2^h stone patterns."""
    rules = ss.spec.rules
    a, b = rules.a, rules.b
    h = ss.height
    bits = ss.bits
    hmask = np.int64((1 << h) - 1)
    borders = np.int64(1 | (1 << (h - 1)))
    relaxed = borders if rules.relaxed_border else np.int64(0)
    st, d1 = _ab_planes(ss)
    E = np.arange(1 << h, dtype=np.int64)[None, :]
    chunk = max(1, (1 << 22) >> h)
    pieces = []
    counts = np.zeros(hi - lo, dtype=np.int64)
    for clo in range(lo, hi, chunk):
        chi = min(hi, clo + chunk)
        stS = st[clo:chi, None]
        d1S = d1[clo:chi, None]
        ok_pairs = (d1S & ~E) == 0
        up = (E >> 1)
        down = (E << 1) & hmask
        ge1 = (stS | up | down) & hmask
        ge2 = ((stS & up) | (stS & down) | (up & down)) & hmask
        # deficits of the appended column
        if b == 1:
            need_ns = hmask & ~E & ~ge1
        else:
            need_ns = hmask & ~E & ge1 & ~ge2
            ok_pairs &= (hmask & ~E & ~ge1 & ~relaxed) == 0
        need_ns &= ~relaxed
        if a == 0:
            d1T = need_ns
            stneed = np.zeros_like(E + stS)
        else:
            stneed = E & ~ge1 & ~relaxed & hmask
            d1T = need_ns | stneed
        packed_t = np.zeros((chi - clo, E.shape[1]), dtype=np.int64)
        for r in range(h):
            bit = np.int64(1) << r
            if a == 0:
                v = np.where((E & bit) != 0, 0,
                             np.where((d1T & bit) != 0, 2, 1))
            else:
                v = np.where((E & bit) != 0,
                             np.where((stneed & bit) != 0, 1, 0),
                             np.where((d1T & bit) != 0, 3, 2))
            packed_t |= v.astype(np.int64) << (bits * (h - 1 - r))
        idx = np.searchsorted(ss.packed, packed_t)
        idx[idx >= len(ss)] = 0
        hit = ok_pairs & (ss.packed[idx] == packed_t)
        rows, cols_e = np.nonzero(hit)
        targets = idx[rows, cols_e]
        order = np.lexsort((targets, rows))
        rows = rows[order]
        targets = targets[order]
        np.add.at(counts, rows + (clo - lo), 1)
        pieces.append(targets.astype(np.int64))
    indptr = np.zeros(hi - lo + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    cols = np.concatenate(pieces) if pieces else np.empty(0, np.int64)
    return indptr, cols


def _dist2_planes(ss):
    """Per-state bit planes (stone, prev, need1, need2), row r at bit r."""
    if getattr(ss, "_planes", None) is None:
        h = ss.height
        packed = ss.packed
        st = np.zeros(len(ss), dtype=np.int64)
        pv = np.zeros(len(ss), dtype=np.int64)
        n1 = np.zeros(len(ss), dtype=np.int64)
        n2 = np.zeros(len(ss), dtype=np.int64)
        for r in range(h):
            v = (packed >> (3 * (h - 1 - r))) & 7
            bit = np.int64(1) << r
            st |= np.where(v <= 1, bit, 0)
            pv |= np.where((v == 1) | (v == 3), bit, 0)
            n1 |= np.where(v == 5, bit, 0)
            n2 |= np.where(v == 4, bit, 0)
        object.__setattr__(ss, "_planes", (st, pv, n1, n2))
    return getattr(ss, "_planes")


def _succ_dist2_fast(ss, lo, hi):
    """Vectorized dist2 successors: the next column's labels are a function of
    its stone pattern, so all 2^h patterns are tried with bit-plane logic."""
    h = ss.height
    if h > 14:
        return _succ_radius2(ss, lo, hi)
    hmask = np.int64((1 << h) - 1)
    st, pv, n1, n2 = _dist2_planes(ss)
    E = np.arange(1 << h, dtype=np.int64)[None, :]
    chunk = max(1, (1 << 22) >> h)
    pieces = []
    counts = np.zeros(hi - lo, dtype=np.int64)
    for clo in range(lo, hi, chunk):
        chi = min(hi, clo + chunk)
        stS = st[clo:chi, None]
        pvS = pv[clo:chi, None]
        n1S = n1[clo:chi, None]
        n2S = n2[clo:chi, None]
        ok_pairs = (n1S & ~E) == 0
        near = E | (E >> 1) | ((E << 1) & hmask)
        n1T = n2S & ~near & hmask
        domT = (((E << 1) | (E >> 1) | (E << 2) | (E >> 2)) & hmask
                | stS | ((stS << 1) & hmask) | (stS >> 1) | pvS) & hmask
        n2T = hmask & ~E & ~n1T & ~domT
        rest = hmask & ~E & ~n1T & ~n2T
        okpT = rest & stS
        okT = rest & ~stS
        packed_t = np.zeros(stS.shape[:1] + E.shape[1:], dtype=np.int64)
        packed_t = np.broadcast_to(packed_t, (chi - clo, E.shape[1])).copy()
        for r in range(h):
            bit = np.int64(1) << r
            v = np.where((E & bit) != 0, np.where((stS & bit) != 0, 1, 0), 0)
            v = np.where((n1T & bit) != 0, 5, v)
            v = np.where((n2T & bit) != 0, 4, v)
            v = np.where((okpT & bit) != 0, 3, v)
            v = np.where((okT & bit) != 0, 2, v)
            packed_t |= v.astype(np.int64) << (3 * (h - 1 - r))
        idx = np.searchsorted(ss.packed, packed_t)
        idx[idx >= len(ss)] = 0
        hit = ok_pairs & (ss.packed[idx] == packed_t)
        rows, cols_e = np.nonzero(hit)
        targets = idx[rows, cols_e]
        order = np.lexsort((targets, rows))
        rows = rows[order]
        targets = targets[order]
        np.add.at(counts, rows + (clo - lo), 1)
        pieces.append(targets.astype(np.int64))
    indptr = np.zeros(hi - lo + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    cols = np.concatenate(pieces) if pieces else np.empty(0, np.int64)
    return indptr, cols


def _succ_radius1(ss, lo, hi, pair_budget):
    rules = ss.spec.rules
    h = ss.height
    tab = _tables(rules, ss.mode)
    nv, k = tab.nv, tab.k
    pair = tab.pair
    bits = ss.bits
    index = ss.index()
    pruned = ss.pruned_by_symmetry
    dec = ss.decoded()
    indptr = [0]
    cols = []
    tvals = [0] * h

    for si in range(lo, hi):
        svals = dec[si]
        found = []

        def rec(i, prev1, cur):
            if i == h:
                key = ((svals[h - 1] * k + prev1) * k + cur) * k + nv
                if pair[key]:
                    found.append(pack_values(tvals, bits))
                return
            base = svals[i - 1] if i > 0 else None
            for t in range(nv):
                if i > 0:
                    key = ((base * k + prev1) * k + cur) * k + t
                    if not pair[key]:
                        continue
                tvals[i] = t
                rec(i + 1, cur, t)

        # depth 0 seeds: prev1 = BND slot
        for t0 in range(nv):
            tvals[0] = t0
            if h == 1:
                key = ((svals[0] * k + nv) * k + t0) * k + nv
                if pair[key]:
                    found.append(pack_values(tvals, bits))
            else:
                rec(1, nv, t0)

        if pruned:
            idxs = set()
            for p in found:
                q = min(p, reflect_packed(p, h, bits))
                j = index.get(q)
                if j is not None:
                    idxs.add(j)
            row = sorted(idxs)
        else:
            row = [index[p] for p in found if p in index]
        cols.extend(row)
        indptr.append(len(cols))
        if len(cols) > pair_budget:
            raise CapacityExceeded(f"more than {pair_budget} compatible pairs")
    return np.array(indptr, dtype=np.int64), np.array(cols, dtype=np.int64)


def _succ_radius2(ss, lo, hi):
    rules = ss.spec.rules
    h = ss.height
    mode = ss.mode
    bits = ss.bits
    index = ss.index()
    dec = ss.decoded()
    pruned = ss.pruned_by_symmetry
    indptr = [0]
    cols = []
    tvals = [0] * h

    def sval(svals, i):
        return svals[i] if 0 <= i < h else BND

    for si in range(lo, hi):
        svals = dec[si]
        cands = successor_candidates(ss, si) if not pruned else range(len(ss))
        row = []
        for ti in cands:
            t = dec[ti]
            if is_compatible(ss.spec, svals, t, h, mode):
                row.append(ti)
            elif pruned:
                tr = unpack_values(ss.reflect(ti), h, bits)
                if is_compatible(ss.spec, svals, tr, h, mode):
                    row.append(ti)
        row = sorted(set(row))
        cols.extend(row)
        indptr.append(len(cols))
    return np.array(indptr, dtype=np.int64), np.array(cols, dtype=np.int64)


def _succ_minimal(ss, lo, hi):
    rules = ss.spec.rules
    h = ss.height
    shift = 4 * h
    index = ss.index()
    dec = ss.decoded()
    pruned = ss.pruned_by_symmetry
    indptr = [0]
    cols = []
    for si in range(lo, hi):
        vals = list(dec[si])
        k = int(ss.ktags[si])
        dead, zmask = rules.trans_requirements(vals, k)
        if dead:
            indptr.append(len(cols))
            continue
        kt = max(0, k - 1)
        base = [((v << 1) & 0b1110) for v in vals]
        row = []
        for e in range(1 << h):
            if e & zmask:
                continue
            tvals = [base[i] | ((e >> i) & 1) for i in range(h)]
            packed = (kt << shift) | pack_values(tvals, 4)
            if pruned:
                packed = min(packed, (kt << shift) | reflect_packed(
                    pack_values(tvals, 4), h, 4))
            j = index.get(packed)
            if j is not None:
                row.append(j)
        row = sorted(set(row)) if pruned else sorted(row)
        cols.extend(row)
        indptr.append(len(cols))
    return np.array(indptr, dtype=np.int64), np.array(cols, dtype=np.int64)


# ---------------------------------------------------------------------------
# State cache (GDL1)
# ---------------------------------------------------------------------------


def _cache_path(spec, height, mode, pruned, cache_dir):
    tag = f"{spec.name.replace(':', '_').replace(',', '_')}-h{height}-{mode}" \
          f"-{'p' if pruned else 'f'}.gdl"
    return os.path.join(cache_dir, tag)


def _cache_store(ss: StateSet, cache_dir):
    if not cache_dir:
        return
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(ss.spec, ss.height, ss.mode, ss.pruned_by_symmetry, cache_dir)
    lines = b"\n".join(str(int(p)).encode() for p in ss.packed)
    payload = zlib.compress(lines)
    name = ss.spec.name.encode()
    flags = (1 if ss.pruned_by_symmetry else 0) | (2 if ss.ktags is not None else 0)
    header = CACHE_MAGIC + struct.pack(
        "<BHB", len(name), ss.height, flags
    ) + name + mode_byte(ss.mode)
    with open(path, "wb") as fh:
        fh.write(header + payload)


def mode_byte(mode):
    return b"\x00" if mode == INTERIOR else b"\x01"


def _cache_load(spec, height, mode, pruned, cache_dir):
    if not cache_dir:
        return None
    path = _cache_path(spec, height, mode, pruned, cache_dir)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != CACHE_MAGIC:
        return None
    nlen, h, flags = struct.unpack("<BHB", blob[4:8])
    name = blob[8:8 + nlen].decode()
    mb = blob[8 + nlen:9 + nlen]
    if name != spec.name or h != height or mb != mode_byte(mode):
        return None
    if bool(flags & 1) != pruned:
        return None
    payload = zlib.decompress(blob[9 + nlen:])
    packed = np.array([int(x) for x in payload.split(b"\n") if x], dtype=np.int64)
    ktags = None
    if flags & 2:
        ktags = (packed >> (4 * height)).astype(np.int8)
    return StateSet(spec, height, mode, pruned, packed, ktags)
