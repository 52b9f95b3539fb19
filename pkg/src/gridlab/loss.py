"""Loss method: band and corner transfer matrices, border minima, gamma bounds.

The border of height h is swept as four bands joined by four corners; the
band matrix T_a charges, on appending a column, exactly the loss that step
determines: the new column's positional waste and incoming excess, plus one
unit for each old-column cell that was already satisfied and now receives one
more dominator.  The corner matrix folds an h x h square between the last
column of one band and the first column of the next.  The minimum border loss
is the tropical trace of (T_a^(m-2h-1) C_a T_a^(n-2h-1) C_a)^2, and the
problem's reversal map turns it into a lower bound on gamma.

Charging conventions are pinned by tests: the path-loss accounting property
against the brute-force band oracle, and the border recurrence / closed-form
anchors on the 2-domination problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooSmall, UnsupportedProblem
from .problems import BND, INTERIOR, LOSS_BAND, ABRules, RomanRules, get_problem
from .semiring import (
    INF,
    MIN_PLUS,
    Recurrence,
    SparseSemiringMatrix,
    detect_recurrence,
    minplus_matmul_dense,
    minplus_matmul_dense_sparse,
)
from .solver import build_system
from .problems import reverse_loss
from .states import enumerate_states, pack_values, unpack_values


def _loss_rules(spec):
    rules = spec.rules
    if spec.loss_model is None or not isinstance(rules, (ABRules, RomanRules)):
        raise UnsupportedProblem(
            f"band loss is not supported for {spec.name}"
        )
    if spec.loss_model.validated is False:
        raise UnsupportedProblem(
            f"{spec.name} loss model is registered but not band-computable"
        )
    return rules


def _sup(rules, v):
    return 0 if v == BND else rules.supply[v]


def append_charge(rules, scale, svals, tvals, h, u_val=None, right_border=False):
    """Loss charged when column t is appended after column s.

    ``u_val`` is the (visible) value above t's top cell in corner squares;
    bands leave it None, their top row's upper neighbour being unseen.
    ``right_border`` marks square columns on the grid's outer edge.
    """
    loss = 0
    for r in range(h):
        t = tvals[r]
        miss = (1 if r == h - 1 else 0) + (1 if right_border else 0)
        loss += scale * rules.supply[t] * miss
        q = rules.supply[svals[r]]
        if r > 0:
            q += rules.supply[tvals[r - 1]]
        if r < h - 1:
            q += rules.supply[tvals[r + 1]]
        if r == 0 and u_val is not None:
            q += rules.supply[u_val]
        loss += scale * max(0, q - rules.req[t])
        if rules.supply[t] and rules.deficit[svals[r]] == 0:
            loss += scale
        loss += rules.penalty[t]
    return loss


def self_charge(rules, scale, vals, h):
    """Loss of a chain's first column by itself (no left neighbour).

    Returns None when the labels claim a left supply that does not exist.
    Styles whose band relation resolves every pending need (fin cap 0) let
    the top cell claim its unseen upper neighbour here instead.
    """
    loss = 0
    for r in range(h):
        v = vals[r]
        ud = (rules.supply[vals[r - 1]] if r > 0 else 0) + (
            rules.supply[vals[r + 1]] if r < h - 1 else 0
        )
        req = rules.req[v]
        allowed = {max(0, req - ud)}
        if r == 0 and rules.band_top_fin_cap == 0:
            allowed.add(max(0, req - ud - 1))
        if rules.deficit[v] not in allowed:
            return None
        loss += scale * rules.supply[v] * (1 if r == h - 1 else 0)
        loss += scale * max(0, ud - req)
        loss += rules.penalty[v]
    return loss


@dataclass
class BandSystem:
    spec: object
    h: int
    states: object
    T: SparseSemiringMatrix
    _corner: np.ndarray = field(default=None, repr=False)
    _powers: dict = field(default_factory=dict, repr=False)
    _rec: Recurrence = field(default=None, repr=False)
    _exact: dict = field(default_factory=dict, repr=False)
    _half: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self):
        return len(self.states)

    def power(self, e):
        """Dense T^e (e >= 0), cached."""
        if e == 0:
            eye = np.full((self.dim, self.dim), INF, dtype=np.int64)
            np.fill_diagonal(eye, 0)
            return eye
        if 1 not in self._powers:
            self._powers[1] = self.T.to_dense()
        if e not in self._powers:
            best = max(k for k in self._powers if k <= e)
            cur = self._powers[best]
            for _ in range(e - best):
                cur = minplus_matmul_dense_sparse(cur, self.T)
            self._powers[e] = cur
        return self._powers[e]

    def corner(self):
        if self._corner is None:
            self._corner = _build_corner(self)
        return self._corner

    def recurrence(self, max_exponent=128):
        if self._rec is None:
            self._rec = detect_recurrence(self.T, max_exponent)
        return self._rec


_BAND_CACHE: dict = {}


def build_band(spec, h) -> BandSystem:
    """Band states and the loss-increment transfer matrix T_a."""
    if isinstance(spec, str):
        spec = get_problem(spec)
    key = (spec.name, h)
    if key in _BAND_CACHE:
        return _BAND_CACHE[key]
    rules = _loss_rules(spec)
    scale = spec.loss_model.scale
    sysb = build_system(spec, h, prune_symmetry=False, mode=LOSS_BAND, threads=1)
    dec = sysb.states.decoded()
    vals = np.empty(sysb.pair_count, dtype=np.int64)
    for i in range(sysb.dim):
        lo, hi = int(sysb.indptr[i]), int(sysb.indptr[i + 1])
        for k in range(lo, hi):
            vals[k] = append_charge(rules, scale, dec[i], dec[int(sysb.cols[k])], h)
    T = SparseSemiringMatrix(sysb.dim, sysb.indptr, sysb.cols, vals, MIN_PLUS)
    bs = BandSystem(spec, h, sysb.states, T)
    _BAND_CACHE[key] = bs
    return bs


# ---------------------------------------------------------------------------
# Corner
# ---------------------------------------------------------------------------


def _corner_col_ok(rules, vals, h):
    """May this label column appear inside a corner square?"""
    for r in range(h):
        v = vals[r]
        if rules.deficit[v] > 1:
            return False
        ud = (rules.supply[vals[r - 1]] if r > 0 else 0) + (
            rules.supply[vals[r + 1]] if r < h - 1 else 0
        )
        xmax = 2 if r == 0 else 1  # left plus, on the top row, the cell above
        req = rules.req[v]
        if rules.deficit[v] not in {max(0, req - ud - x) for x in range(xmax + 1)}:
            return False
        if isinstance(rules, RomanRules):
            vm = vals[r - 1] if r > 0 else BND
            vp = vals[r + 1] if r < h - 1 else BND
            if not rules.row_ok(vm, v, vp, h, INTERIOR, False):
                return False
    return True


def _corner_square_states(rules, h, mode):
    nv = rules.nvalues(mode)
    bits = max(1, (nv - 1).bit_length())
    out = []
    vals = [0] * h

    def rec(i):
        if i == h:
            if _corner_col_ok(rules, vals, h):
                out.append(tuple(vals))
            return
        for v in range(nv):
            vals[i] = v
            rec(i + 1)

    rec(0)
    return out


def _roman_adj_ok(rules, a, b):
    if not isinstance(rules, RomanRules) or not rules.optimized:
        return True
    if a == rules.S1 and b in (rules.TS, rules.S1):
        return False
    if b == rules.S1 and a in (rules.TS, rules.S1):
        return False
    return True


def _corner_edges(rules, scale, h, src_states, dst_states, u_val, last_col,
                  src_is_band):
    """Edges (src -> dst) of one corner fold step, with their base charges."""
    edges = []
    for si, svals in enumerate(src_states):
        for ti, tvals in enumerate(dst_states):
            ok = True
            for r in range(h):
                t = tvals[r]
                seen = rules.supply[svals[r]]
                if r > 0:
                    seen += rules.supply[tvals[r - 1]]
                if r < h - 1:
                    seen += rules.supply[tvals[r + 1]]
                if r == 0:
                    seen += rules.supply[u_val]
                d = max(0, rules.req[t] - seen)
                if rules.deficit[t] != d or d > 1:
                    ok = False
                    break
                if last_col and d != 0:
                    ok = False
                    break
                cap = rules.band_top_fin_cap if (src_is_band and r == 0) else 0
                if rules.deficit[svals[r]] - rules.supply[t] > cap:
                    ok = False
                    break
                if not _roman_adj_ok(rules, svals[r], t):
                    ok = False
                    break
            if ok and not _roman_adj_ok(rules, u_val, tvals[0]):
                ok = False
            if not ok:
                continue
            w = append_charge(rules, scale, svals, tvals, h,
                              u_val=u_val, right_border=last_col)
            edges.append((si, ti, w, rules.supply[tvals[0]]))
    arr = np.array(edges, dtype=np.int64).reshape(-1, 4)
    order = np.argsort(arr[:, 0], kind="stable")
    return arr[order]


def _b_cell_charge(rules, scale, bvals, c, h, t0_sup):
    """Charge and label check for band cell b[c] once square column c exists.

    Returns None if b's label is inconsistent with its visible dominators.
    """
    v = bvals[c]
    q = t0_sup
    if c > 0:
        q += rules.supply[bvals[c - 1]]
    if c < h - 1:
        q += rules.supply[bvals[c + 1]]
    req = rules.req[v]
    allowed = {max(0, req - q)}
    if c == 0:
        allowed.add(max(0, req - q - 1))
    if rules.deficit[v] not in allowed:
        return None
    w = scale * max(0, q - req) + rules.penalty[v]
    if c == h - 1:
        w += scale * rules.supply[v]
    return w


def _build_corner(bs: BandSystem):
    """C_a[a][b]: minimum loss over an h x h corner square between bands."""
    spec, h = bs.spec, bs.h
    rules = _loss_rules(spec)
    scale = spec.loss_model.scale
    band_states = bs.states.decoded()
    sq_states = _corner_square_states(rules, h, LOSS_BAND)
    nb = len(band_states)
    ns = len(sq_states)
    nv = rules.nvalues(LOSS_BAND)

    sq_edges = {}
    start_edges = {}
    for u in range(nv):
        for last in (False, True):
            sq_edges[u, last] = _corner_edges(
                rules, scale, h, sq_states, sq_states, u, last, False
            )
        start_edges[u] = _corner_edges(
            rules, scale, h, band_states, sq_states, u, h == 1, True
        )

    def fold(vec, edges, offs, srcdim):
        out = np.full(srcdim, INF, dtype=np.int64)
        if len(edges) == 0:
            return out
        w = edges[:, 2] + offs[edges[:, 3]] + vec[edges[:, 1]]
        np.minimum(w, INF, out=w)
        srcs, starts = np.unique(edges[:, 0], return_index=True)
        out[srcs] = np.minimum.reduceat(w, starts)
        return out

    def offsets(bvals, c):
        offs = np.full(2, INF, dtype=np.int64)
        for sup in (0, 1):
            w = _b_cell_charge(rules, scale, bvals, c, h, sup)
            if w is not None:
                offs[sup] = w
        return offs

    corner = np.full((nb, nb), INF, dtype=np.int64)
    for bi in range(nb):
        bvals = band_states[bi]
        vec = np.zeros(ns, dtype=np.int64)
        good = True
        for c in range(h - 1, 0, -1):
            vec = fold(vec, sq_edges[bvals[c], c == h - 1], offsets(bvals, c), ns)
            if not (vec < INF).any():
                good = False
                break
        if not good:
            continue
        corner[:, bi] = fold(vec, start_edges[bvals[0]], offsets(bvals, 0), nb)
    return corner


# ---------------------------------------------------------------------------
# Border loss and bounds
# ---------------------------------------------------------------------------


def border_min_loss(bs: BandSystem, n: int, m: int) -> int:
    """Scaled minimum loss over the height-h border (the tropical trace)."""
    h = bs.h
    if 2 * h >= min(n, m):
        raise DimensionTooSmall(f"need 2h < min(n, m), got h={h}, {n}x{m}")
    key = (n, m)
    if key not in bs._exact:
        C = bs.corner()
        em, en = m - 2 * h - 1, n - 2 * h - 1
        right = bs._half.get(en)
        if right is None:
            right = minplus_matmul_dense_sparse(
                minplus_matmul_dense(C, bs.power(en)), self_sparse(C)
            )
            bs._half[en] = right
        half = minplus_matmul_dense(bs.power(em), right)
        # min over the diagonal of half^2 without forming the square
        bs._exact[key] = int(np.minimum(half + half.T, INF).min())
    return bs._exact[key]


_C_SPARSE_CACHE: dict = {}


def self_sparse(dense):
    key = id(dense)
    if key not in _C_SPARSE_CACHE:
        _C_SPARSE_CACHE[key] = SparseSemiringMatrix.from_dense(dense, MIN_PLUS)
    return _C_SPARSE_CACHE[key]


def lower_bound(spec, n: int, m: int, h: int) -> int:
    """Loss-method lower bound on gamma(n, m) with a height-h border."""
    if isinstance(spec, str):
        spec = get_problem(spec)
    bs = build_band(spec, h)
    loss = border_min_loss(bs, n, m)
    return reverse_loss(spec, n, m, loss)


def extended_lower_bound(spec, n: int, m: int, h: int,
                         max_exponent: int = 128) -> int:
    """Lower bound for arbitrarily large grids via the band recurrence.

    T_a^(e+K) = T_a^e + P for e >= e0 lets the border loss of (n, m) be read
    off a base grid congruent mod K: each period adds 2P per direction (the
    border has two horizontal and two vertical bands).
    """
    if isinstance(spec, str):
        spec = get_problem(spec)
    bs = build_band(spec, h)
    rec = bs.recurrence(max_exponent)
    e0, K, P = rec.start, rec.period, rec.increment

    def reduce_dim(x):
        e = x - 2 * h - 1
        if e < e0 + K:
            return x, 0
        k = (e - e0) // K
        base = e - k * K
        if base < e0:
            k -= 1
            base += K
        return base + 2 * h + 1, k

    n0, kn = reduce_dim(n)
    m0, km = reduce_dim(m)
    loss = border_min_loss(bs, n0, m0) + 2 * P * (kn + km)
    return reverse_loss(spec, n, m, loss)


def band_path_loss(bs: BandSystem, length: int) -> int:
    """Minimum self-loss of an honest first column plus a T_a path of the
    given length; the brute band oracle must agree with this value."""
    rules = _loss_rules(bs.spec)
    scale = bs.spec.loss_model.scale
    dec = bs.states.decoded()
    start = np.full(bs.dim, INF, dtype=np.int64)
    for i, vals in enumerate(dec):
        w = self_charge(rules, scale, vals, bs.h)
        if w is not None:
            start[i] = w
    vec = start
    for _ in range(length - 1):
        vec = minplus_matmul_dense(vec.reshape(1, -1), bs.power(1)).ravel()
    return int(vec.min())
