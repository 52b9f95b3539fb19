"""Problem registry: every domination variant as data plus local rules.

Each problem defines a per-cell value alphabet and radius-bounded local rules
(validity within a column, first/end membership, compatibility between
consecutive columns).  Labels are deterministic functions of the stone
configuration, so valid state sequences are in cost-preserving bijection with
the problem's dominating sets; the oracle module is the ground truth for that
claim and the test suite checks it exhaustively on small grids.

Modes: ``interior`` rules describe full grids; ``loss_band`` rules relax the
band's top row (index 0), whose unseen neighbour above may supply one
dominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .errors import UnknownProblem

INTERIOR = "interior"
LOSS_BAND = "loss_band"

# Sentinel id for a nonexistent neighbouring row in rule checks.
BND = 15


@dataclass(frozen=True)
class CellValue:
    id: int
    label: str
    cost: int


@dataclass(frozen=True)
class LossModel:
    """Loss bookkeeping: scaled integer weights plus the reversal map.

    The reversal is gamma >= ceil((nm_factor * n * m + L) / divisor) where L
    is the scaled minimum loss.  ``scale`` keeps all matrix entries integral.
    """

    scale: int
    nm_factor: int
    divisor: int
    validated: bool = True


@dataclass(frozen=True)
class CellContext:
    """Neighbourhood summary for one cell, for local loss evaluation.

    ``supplying_neighbours`` counts dominating influence received (for
    distance-2 it counts the whole radius-2 ball, including the cell itself
    when it holds a stone); ``missing_sides`` counts nonexistent neighbour
    slots (1 on a border, 2 in a corner).
    """

    value: CellValue
    supplying_neighbours: int
    missing_sides: int


class ProblemSpec:
    """A domination variant: alphabet, rules, costs and loss model."""

    def __init__(self, name, rules, window, loss_model=None):
        self.name = name
        self.rules = rules
        self.window = window
        self.loss_model = loss_model

    @property
    def alphabet(self):
        return self.rules.values(INTERIOR)

    def __repr__(self):
        return f"ProblemSpec({self.name!r})"


def cost_of(spec: ProblemSpec, v) -> int:
    """Per-cell contribution of value v to the cost of a dominating set."""
    if isinstance(v, CellValue):
        return v.cost
    if isinstance(v, str):
        for cv in spec.alphabet:
            if cv.label == v:
                return cv.cost
        raise KeyError(v)
    return spec.alphabet[v].cost


def local_loss(spec: ProblemSpec, ctx: CellContext) -> int:
    """The cell's scaled loss: wasted influence plus excess incoming domination."""
    rules = spec.rules
    lm = spec.loss_model
    if lm is None:
        raise UnknownProblem(f"{spec.name} has no loss model")
    vid = ctx.value.id
    out = lm.scale * rules.supply[vid] * ctx.missing_sides
    out += lm.scale * max(0, ctx.supplying_neighbours - rules.req[vid])
    out += rules.penalty[vid]
    return out


def reverse_loss(spec: ProblemSpec, n: int, m: int, loss_scaled: int) -> int:
    """Lower bound on gamma from a scaled border loss, in exact arithmetic."""
    lm = spec.loss_model
    if lm is None:
        raise UnknownProblem(f"{spec.name} has no loss model")
    val = Fraction(lm.nm_factor * n * m + loss_scaled, lm.divisor)
    return ceil(val)


# ---------------------------------------------------------------------------
# (a, b)-domination family: members of S need >= a stone neighbours,
# non-members need >= b.  dom = (0,1), total = (1,1), 2dom = (0,2).
# ---------------------------------------------------------------------------


class ABRules:
    """Cell value = (has_stone, recorded deficit).

    The deficit counts dominators still missing after the left, upper and
    lower neighbours have been seen.  Interior columns admit deficit <= 1
    (one future column supplies at most one neighbour); in loss-band mode the
    top row additionally admits deficit 2, the unseen row above standing in
    for the second dominator.
    """

    window = 1
    vradius = 1
    svradius = 0
    band_top_fin_cap = 1  # a pending top-row need may be met from above

    def __init__(self, a, b, relaxed_border=False):
        if not (0 <= a <= 2 and 1 <= b <= 2):
            raise UnknownProblem(f"(a,b)=({a},{b}) outside the supported range")
        self.a = a
        self.b = b
        self.relaxed_border = relaxed_border
        self._values = {}
        for mode in (INTERIOR, LOSS_BAND):
            cap_s = min(a, 1 if mode == INTERIOR else 2)
            cap_n = min(b, 1 if mode == INTERIOR else 2)
            vals = []
            for d in range(cap_s + 1):
                label = "stone" if a == 0 else ("stone_ok", "stone_need_one", "stone_need_two")[d]
                vals.append(CellValue(len(vals), label, 1))
            for d in range(cap_n + 1):
                vals.append(CellValue(len(vals), ("ok", "need_one", "need_two")[d], 0))
            self._values[mode] = vals
        nv = len(self._values[LOSS_BAND])
        self.stone = [False] * nv
        self.deficit = [0] * nv
        for v in self._values[LOSS_BAND]:
            self.stone[v.id] = v.cost > 0
            self.deficit[v.id] = {"stone": 0, "stone_ok": 0, "stone_need_one": 1,
                                  "stone_need_two": 2, "ok": 0, "need_one": 1,
                                  "need_two": 2}[v.label]
        self.supply = [1 if self.stone[i] else 0 for i in range(nv)]
        self.req = [(a if self.stone[i] else b) for i in range(nv)]
        self.penalty = [0] * nv
        self.loss_scale = 1

    def values(self, mode):
        return self._values[mode]

    def nvalues(self, mode):
        return len(self._values[mode])

    def _sup(self, v):
        return 0 if v == BND else self.supply[v]

    def _req(self, v, border):
        if self.relaxed_border and border:
            return 0
        return self.a if self.stone[v] else self.b

    def row_ok(self, vm, v, vp, h, mode, first):
        d = self.deficit[v]
        border = vm == BND or vp == BND
        req = self._req(v, border)
        ud = self._sup(vm) + self._sup(vp)
        top = mode == LOSS_BAND and vm == BND
        if d > (2 if top else 1):
            return False
        if first:
            return d == max(0, req - ud)
        return d in (max(0, req - ud), max(0, req - ud - 1))

    def end_ok(self, v):
        return self.deficit[v] == 0

    def pair_ok(self, s, tm, t, tp, h, mode):
        top = tm == BND
        border = top or tp == BND
        cap = 1 if (mode == LOSS_BAND and top) else 0
        if self.deficit[s] - self.supply[t] > cap:
            return False
        d = self.deficit[t]
        if d > (2 if (mode == LOSS_BAND and top) else 1):
            return False
        req = self._req(t, border)
        seen = self.supply[s] + self._sup(tm) + self._sup(tp)
        return d == max(0, req - seen)


# ---------------------------------------------------------------------------
# Roman domination: values two_stones / stone / ok / need_one.
# ---------------------------------------------------------------------------


class RomanRules:
    """Roman rules; ``optimized`` forbids stones adjacent to any stones.

    The optimized variant keeps at least one minimum Roman dominating set per
    grid, so min-cost results are unchanged, but it must be off for anything
    that counts configurations.
    """

    window = 1
    vradius = 1
    svradius = 0
    loss_scale = 2
    band_top_fin_cap = 0  # published band relation resolves every pending need

    TS, S1, OK, NEED = 0, 1, 2, 3

    def __init__(self, optimized=True):
        self.optimized = optimized
        self._values = [
            CellValue(0, "two_stones", 2),
            CellValue(1, "stone", 1),
            CellValue(2, "ok", 0),
            CellValue(3, "need_one", 0),
        ]
        self.stone = [True, True, False, False]
        self.supply = [1, 0, 0, 0]
        self.req = [0, 0, 1, 1]
        self.deficit = [0, 0, 0, 1]
        self.penalty = [0, 3, 0, 0]  # a lone stone costs 3/2, stored x2

    def values(self, mode):
        return self._values

    def nvalues(self, mode):
        return 4

    def _ts(self, v):
        return 1 if v == self.TS else 0

    def row_ok(self, vm, v, vp, h, mode, first):
        if v == self.NEED and (vm == self.TS or vp == self.TS):
            return False
        if self.optimized and v == self.S1:
            if vm in (self.TS, self.S1) or vp in (self.TS, self.S1):
                return False
        if first and v in (self.OK, self.NEED):
            seen = self._ts(vm) + self._ts(vp)
            return (seen >= 1) == (v == self.OK)
        return True

    def end_ok(self, v):
        return v != self.NEED

    def pair_ok(self, s, tm, t, tp, h, mode):
        # Band compatibility follows the published relation: a pending need is
        # always resolved by the next column, and the top row's ok may instead
        # be justified by the unseen row above.
        if s == self.NEED and t != self.TS:
            return False
        if self.optimized:
            if s in (self.TS, self.S1) and t == self.S1:
                return False
            if s == self.S1 and t == self.TS:
                return False
        if t in (self.OK, self.NEED):
            seen = self._ts(s) + self._ts(tm) + self._ts(tp)
            if mode == LOSS_BAND and tm == BND:
                return seen == 0 or t == self.OK
            return (seen >= 1) == (t == self.OK)
        return True


# ---------------------------------------------------------------------------
# Distance-2 domination: six values carrying one column of history.
# ---------------------------------------------------------------------------


class Dist2Rules:
    """Values: stone, stone_prev, ok, ok_prev, need_dist_two, need_dist_one.

    ``_prev`` records a stone in the previous column.  ``need_dist_two``
    marks an undominated cell; ``need_dist_one`` marks a cell whose left
    neighbour is still undominated, forcing a stone in the next column.
    """

    window = 2
    vradius = 2
    svradius = 1

    ST, STP, OK, OKP, N2, N1 = 0, 1, 2, 3, 4, 5

    def __init__(self):
        self._values = [
            CellValue(0, "stone", 1),
            CellValue(1, "stone_prev", 1),
            CellValue(2, "ok", 0),
            CellValue(3, "ok_prev", 0),
            CellValue(4, "need_dist_two", 0),
            CellValue(5, "need_dist_one", 0),
        ]
        self.stone = [True, True, False, False, False, False]
        self.prev = [False, True, False, True, False, False]
        self.supply = [1, 1, 0, 0, 0, 0]
        self.req = [1, 1, 1, 1, 1, 1]  # ball counts include the cell itself
        self.deficit = [0, 0, 0, 0, 1, 1]
        self.penalty = [0, 0, 0, 0, 0, 0]
        self.loss_scale = 1

    def values(self, mode):
        return self._values

    def nvalues(self, mode):
        return 6

    def _st(self, v):
        return v != BND and self.stone[v]

    def _pv(self, v):
        return v != BND and self.prev[v]

    def row_ok2(self, vmm, vm, v, vp, vpp, h, mode, first):
        if first and v != BND and self.prev[v]:
            return False
        if v == self.N1:
            if first:
                return False
            if self._st(vm) or self._st(vp):
                return False
            if any(self._pv(u) for u in (vmm, vm, vp, vpp)):
                return False
            return True
        if v == self.N2:
            if self._st(vm) or self._st(vp) or self._st(vmm) or self._st(vpp):
                return False
            if self._pv(vm) or self._pv(vp):
                return False
            return True
        if first and v == self.OK:
            return self._st(vm) or self._st(vp) or self._st(vmm) or self._st(vpp)
        return True

    def end_ok(self, v):
        return v not in (self.N2, self.N1)

    def pair_ok2(self, sm, s, sp, tmm, tm, t, tp, tpp, h, mode):
        if (t != BND and self.prev[t]) != self._st(s):
            return False
        if s == self.N1 and not self._st(t):
            return False
        if self._st(t):
            return True
        left_undone = (s == self.N2) and not (self._st(tm) or self._st(tp))
        if left_undone:
            return t == self.N1
        dominated = (
            self._st(tm) or self._st(tp) or self._st(tmm) or self._st(tpp)
            or self._st(s) or self._st(sm) or self._st(sp) or self._pv(s)
        )
        if dominated:
            return t in (self.OK, self.OKP)
        return t == self.N2


# ---------------------------------------------------------------------------
# Minimal domination variants: 4-bit windows over four consecutive columns.
# ---------------------------------------------------------------------------


class MinimalRules:
    """Minimal (total) domination via raw stone windows.

    A cell value packs the stone bits of the current column and the three
    most recent ones (bit 0 = newest).  Successor windows shift every value
    one bit up, so candidate successors are found by a history-bucket lookup.
    States carry a virtual-prefix tag k (how many window columns lie before
    the grid); transitions and end checks adjudicate the fully-visible middle
    column: domination plus the private-neighbour characterisation of
    minimality.
    """

    window = 3
    vradius = 1

    def __init__(self, total, relaxed_border=False):
        self.total = total
        self.relaxed_border = relaxed_border
        self._values = [
            CellValue(i, f"w{i:04b}", 1 if (i & 1) else 0) for i in range(16)
        ]

    def values(self, mode):
        return self._values

    def nvalues(self, mode):
        return 16

    # Plane conventions: D = bit0 (current), C = bit1, B = bit2, A = bit3.

    @staticmethod
    def planes(vals):
        d = [v & 1 for v in vals]
        c = [(v >> 1) & 1 for v in vals]
        b = [(v >> 2) & 1 for v in vals]
        a = [(v >> 3) & 1 for v in vals]
        return a, b, c, d

    @staticmethod
    def _has(plane, i):
        return 0 <= i < len(plane) and plane[i]

    def _dominated(self, left, col, right, i):
        h = self._has
        return h(left, i) or h(right, i) or h(col, i - 1) or h(col, i + 1)

    def _skip_row(self, i, h):
        return self.relaxed_border and (i == 0 or i == h - 1)

    def _col_dom_ok(self, left, col, right):
        """Every cell of `col` (every non-stone cell for plain domination)
        has a stone neighbour among left/right columns and within the column."""
        for i, s in enumerate(col):
            if self._skip_row(i, len(col)):
                continue
            if s and not self.total:
                continue
            if not self._dominated(left, col, right, i):
                return False
        return True

    def _stone_ok_middle(self, a, b, c, d, e, i, b_real):
        """Minimality of the stone at row i of the middle column c.

        Columns a..e are the five visible planes; ``e`` may be None (treated
        as empty but also unavailable as a private neighbour: a nonexistent
        column never hosts one).  ``b_real`` gates the column-b candidate the
        same way.
        """
        h = self._has
        e_plane = e if e is not None else [0] * len(c)
        if not self.total:
            isolated = not (h(b, i) or h(d, i) or h(c, i - 1) or h(c, i + 1))
            if isolated:
                return True
        # private neighbour in column b (needs b to be a real grid column)
        if b_real:
            if (self.total or not h(b, i)) and not (h(a, i) or h(b, i - 1) or h(b, i + 1)):
                return True
        # private neighbour within column c
        for j in (i - 1, i + 1):
            if 0 <= j < len(c):
                if not self.total and h(c, j):
                    continue
                if not (h(b, j) or h(d, j) or h(c, 2 * j - i)):
                    return True
        # private neighbour in column d (depends on column e)
        if e is not None:
            if (self.total or not h(d, i)) and not (
                h(e_plane, i) or h(d, i - 1) or h(d, i + 1)
            ):
                return True
        return False

    def intra_ok(self, vals, k):
        """Necessary validity of a window with k virtual prefix columns.

        Checks the domination of the two middle columns wherever they are
        real; minimality is adjudicated later, at transitions, when the fifth
        column is visible.
        """
        a, b, c, d = self.planes(vals)
        if k >= 1 and any(a):
            return False
        if k >= 2 and any(b):
            return False
        if k >= 3 and any(c):
            return False
        if k <= 1 and not self._col_dom_ok(a, b, c):
            return False
        if k <= 2 and not self._col_dom_ok(b, c, d):
            return False
        return True

    def trans_requirements(self, vals, k):
        """(dead, zero_mask): constraints on the incoming column E so that the
        middle column C of this window stays minimal.

        ``dead`` means no E can work; otherwise E must avoid the rows in
        ``zero_mask``."""
        if k == 3:
            return False, 0
        a, b, c, d = self.planes(vals)
        h = self._has
        b_real = k <= 1
        zero_mask = 0
        for i, s in enumerate(c):
            if not s or self._skip_row(i, len(c)):
                continue
            if self._stone_ok_middle(a, b, c, d, None, i, b_real):
                continue
            # only a private neighbour at (d, i) can save this stone
            if (not self.total and h(d, i)) or h(d, i - 1) or h(d, i + 1):
                return True, 0
            zero_mask |= 1 << i
        return False, zero_mask

    def end_ok(self, vals, k):
        a, b, c, d = self.planes(vals)
        empty = [0] * len(vals)
        if k <= 2:
            b_real = k <= 1
            for i, s in enumerate(c):
                if s and not self._skip_row(i, len(c)) and not self._stone_ok_middle(
                    a, b, c, d, empty, i, b_real
                ):
                    return False
        if not self._col_dom_ok(c, d, empty):
            return False
        return self._end_d_minimal(b, c, d, k)

    def _end_d_minimal(self, b, c, d, k):
        h = self._has
        c_real = k <= 2
        for i, s in enumerate(d):
            if not s or self._skip_row(i, len(d)):
                continue
            if not self.total:
                if not (h(c, i) or h(d, i - 1) or h(d, i + 1)):
                    continue  # isolated
            ok = False
            if c_real:
                if (self.total or not h(c, i)) and not (h(b, i) or h(c, i - 1) or h(c, i + 1)):
                    ok = True
            if not ok:
                for j in (i - 1, i + 1):
                    if 0 <= j < len(d):
                        if not self.total and h(d, j):
                            continue
                        if not (h(c, j) or h(d, 2 * j - i)):
                            ok = True
                            break
            if not ok:
                return False
        return True


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def _ab_loss_model(a, b):
    return LossModel(scale=1, nm_factor=b, divisor=4 - a + b)


def _build_registry():
    reg = {}
    reg["dom"] = ProblemSpec("dom", ABRules(0, 1), 1, _ab_loss_model(0, 1))
    reg["2dom"] = ProblemSpec("2dom", ABRules(0, 2), 1, _ab_loss_model(0, 2))
    reg["total"] = ProblemSpec("total", ABRules(1, 1), 1, _ab_loss_model(1, 1))
    reg["roman"] = ProblemSpec(
        "roman", RomanRules(optimized=True), 1,
        LossModel(scale=2, nm_factor=2, divisor=5),
    )
    reg["roman-unopt"] = ProblemSpec("roman-unopt", RomanRules(optimized=False), 1)
    reg["dist2"] = ProblemSpec(
        "dist2", Dist2Rules(), 2,
        LossModel(scale=1, nm_factor=1, divisor=13, validated=False),
    )
    reg["minimal-dom"] = ProblemSpec("minimal-dom", MinimalRules(total=False), 3)
    reg["minimal-total"] = ProblemSpec("minimal-total", MinimalRules(total=True), 3)
    return reg


_REGISTRY = _build_registry()


def get_problem(name: str) -> ProblemSpec:
    """Look up a problem; (a,b)-domination is spelled ``ab:A,B``."""
    if name in _REGISTRY:
        return _REGISTRY[name]
    if name.startswith("ab:"):
        try:
            a_s, b_s = name[3:].split(",")
            a, b = int(a_s), int(b_s)
        except ValueError as exc:
            raise UnknownProblem(f"malformed (a,b) problem name {name!r}") from exc
        spec = ProblemSpec(name, ABRules(a, b), 1, _ab_loss_model(a, b))
        return spec
    raise UnknownProblem(name)


def problem_names():
    return sorted(_REGISTRY)
