"""Fixed-height solving: (F, T, E) systems, gamma values, recurrences, formulas.

gamma(n, m) = F^T (.) T^(m-1) (.) E in the tropical semiring.  Recurrences on
gamma come from power periodicity: for dimensions small enough the matrix
powers are hashed directly; for larger systems the prefix-vector sequence
F^T T^l is used instead, which satisfies the same eventual periodicity (a
repeat of the normalized vector is itself a proof, tropical products commute
with adding constants), at a fraction of the memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import parallel
from .errors import InsufficientInitialValues, NotPrimitive, OutOfTable
from .problems import INTERIOR, ProblemSpec, get_problem
from .semiring import (
    INF,
    MIN_PLUS,
    PLUS_TIMES_BIGNAT,
    Recurrence,
    SparseSemiringMatrix,
    detect_recurrence,
    detect_vector_recurrence,
    support_is_primitive,
    vec_mat,
)
from .states import MAX_PAIRS, StateSet, enumerate_states, state_flags

_MATRIX_DETECT_CAP = 420


@dataclass
class TransferSystem:
    """States plus the (F, T, E) data of one fixed-height problem."""

    states: StateSet
    first: np.ndarray
    end: np.ndarray
    cost: np.ndarray
    indptr: np.ndarray
    cols: np.ndarray
    _min_plus: SparseSemiringMatrix = field(default=None, repr=False)
    _count: SparseSemiringMatrix = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.states)

    @property
    def pair_count(self):
        return len(self.cols)

    def matrix(self) -> SparseSemiringMatrix:
        if self._min_plus is None:
            vals = self.cost[self.cols]
            self._min_plus = SparseSemiringMatrix(
                self.dim, self.indptr, self.cols, vals, MIN_PLUS
            )
        return self._min_plus

    def count_matrix(self) -> SparseSemiringMatrix:
        if self._count is None:
            self._count = SparseSemiringMatrix(
                self.dim, self.indptr, self.cols, [1] * len(self.cols),
                PLUS_TIMES_BIGNAT,
            )
        return self._count

    def f_vector(self):
        f = np.full(self.dim, INF, dtype=np.int64)
        f[self.first] = self.cost[self.first]
        return f


_SYSTEM_CACHE: dict = {}


def build_system(
    spec: ProblemSpec,
    n: int,
    prune_symmetry: bool = True,
    mode: str = INTERIOR,
    threads: int | None = None,
    cache_dir: str | None = None,
    pair_budget: int = MAX_PAIRS,
) -> TransferSystem:
    """Enumerate states at height n and assemble the successor structure."""
    ss = enumerate_states(spec, n, mode, prune_symmetry, cache_dir=cache_dir)
    indptr, cols = parallel.run_successors(ss, threads, pair_budget)
    first, end, cost = state_flags(ss)
    return TransferSystem(ss, first, end, cost, indptr, cols)


def get_system(spec, n, prune_symmetry=True, threads=None, cache_dir=None):
    """Memoized build_system (states and successors are immutable)."""
    key = (spec.name, n, prune_symmetry)
    if key not in _SYSTEM_CACHE:
        _SYSTEM_CACHE[key] = build_system(
            spec, n, prune_symmetry, threads=threads, cache_dir=cache_dir
        )
    return _SYSTEM_CACHE[key]


def gamma_range(spec, n, m_max, system=None, prune_symmetry=True, threads=None):
    """[gamma(n, 1), ..., gamma(n, m_max)]; None marks infeasible."""
    sys_ = system or get_system(spec, n, prune_symmetry, threads)
    T = sys_.matrix()
    v = sys_.f_vector()
    out = []
    for m in range(1, m_max + 1):
        if m > 1:
            v = vec_mat(v, T)
        if sys_.end.any():
            val = int(v[sys_.end].min())
        else:
            val = int(INF)
        out.append(None if val >= int(INF) else val)
    return out


def gamma(spec, n, m, system=None, prune_symmetry=True, threads=None):
    """Minimum cost of a dominating set of the n x m grid (None if infeasible)."""
    return gamma_range(spec, n, m, system, prune_symmetry, threads)[-1]


def find_recurrence(spec, n, max_exponent=400, system=None, threads=None):
    """Recurrence gamma(n, m + r) = gamma(n, m) + p, with minimized start.

    Detection runs on power periodicity (matrix powers for small systems,
    prefix-vector powers otherwise -- never on the scalar value sequence).
    The detected relation is then reduced to the smallest divisor period that
    the values verify over one full window (which the power periodicity
    extends to every later m), and the start is shifted backwards through the
    solved values.
    """
    sys_ = system or get_system(spec, n, threads=threads)
    T = sys_.matrix()
    if not support_is_primitive(T):
        raise NotPrimitive(f"transfer matrix of {spec.name} at n={n}")
    if sys_.dim <= _MATRIX_DETECT_CAP:
        rec = detect_recurrence(T, max_exponent)
    else:
        rec = detect_vector_recurrence(sys_.f_vector(), T, max_exponent)
    start_m = rec.start + 1
    r, p = rec.period, rec.increment
    values = gamma_range(spec, n, start_m + 2 * r + 1, system=sys_)

    def val(m):
        return values[m - 1]

    for rp in range(1, r):
        if r % rp or (p * rp) % r:
            continue
        pp = p * rp // r
        window = range(start_m, start_m + r + 1)
        if all(
            val(m) is not None and val(m + rp) == val(m) + pp for m in window
        ):
            r, p = rp, pp
            break
    while start_m > 1:
        m = start_m - 1
        if val(m) is None or val(m + r) is None or val(m + r) != val(m) + p:
            break
        start_m -= 1
    return Recurrence(start=start_m, period=r, increment=p)


# ---------------------------------------------------------------------------
# Closed piecewise formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseFormula:
    """gamma(n, m) = increment * ((m - base_m[c]) // period) + base_value[c]
    for m >= floor with c = m % period; smaller m live in the exception table."""

    n: int
    period: int
    increment: int
    floor: int
    bases: dict          # residue -> (base_m, base_value)
    exceptions: dict     # m -> value for m < floor

    def eval(self, m):
        if m < self.floor:
            if m in self.exceptions:
                return self.exceptions[m]
            raise InsufficientInitialValues(f"m={m} below formula floor")
        base_m, base_v = self.bases[m % self.period]
        return base_v + self.increment * ((m - base_m) // self.period)

    def as_dict(self):
        return {
            "n": self.n,
            "period": self.period,
            "increment": self.increment,
            "floor": self.floor,
            "bases": {str(c): list(b) for c, b in sorted(self.bases.items())},
            "exceptions": {str(m): v for m, v in sorted(self.exceptions.items())},
        }


def synthesize_formula(rec: Recurrence, values: dict, n: int) -> PiecewiseFormula:
    """Build the residue-class table from a recurrence plus initial values.

    ``values`` maps m -> gamma(n, m) and must cover one full period starting
    at the validity floor; values below the floor become exceptions.
    """
    floor = rec.start
    bases = {}
    for m in range(floor, floor + rec.period):
        if m not in values or values[m] is None:
            raise InsufficientInitialValues(
                f"need gamma(n, {m}) to cover residue {m % rec.period}"
            )
        bases[m % rec.period] = (m, values[m])
    exceptions = {m: v for m, v in values.items() if m < floor}
    return PiecewiseFormula(n, rec.period, rec.increment, floor, bases, exceptions)


def eval_formula(formula: PiecewiseFormula, m: int) -> int:
    return formula.eval(m)


# ---------------------------------------------------------------------------
# Published closed formulas (typo-resolved); the solver is the ground truth
# and the test suite cross-checks every branch against it.
# ---------------------------------------------------------------------------


def _ceil_div(a, b):
    return -(-a // b)


def _ref_2dom(n, m):
    if n == 1:
        return _ceil_div(m + 1, 2)
    if n == 2:
        return m
    if n == 3:
        return m + _ceil_div(m, 3)
    if n == 4:
        return 2 * m - m // 4 + (0 if m % 4 == 3 else 1)
    if n == 5:
        return 2 * m + _ceil_div(m, 7) + (1 if m % 7 in (0, 6) else 0)
    if n == 6:
        return 2 * m + (6 * m) // 11 + (1 if m % 11 in (0, 2, 6) else 2)
    if n == 7:
        if m > 9 and m % 18 <= 9 and m % 18 != 7:
            return 3 * m - m // 18 + 1
        return 3 * m - m // 18
    if n == 8:
        # published with a floored m/3; the solver (cross-checked at two
        # heights) matches the ceiling reading
        return 3 * m + _ceil_div(m, 3) + (0 if m % 3 == 1 else 1)
    return (n + 2) * (m + 2) // 3 - 6


def _ref_roman(n, m):
    if n == 1:
        return _ceil_div(2 * m, 3)
    if n == 2:
        return m + 1
    if n == 3:
        return _ceil_div(3 * m, 2) + (0 if m % 4 == 1 else 1)
    if n == 4:
        # published as 2m+1 only for m=5, but both solver and brute force give
        # 13 at m=6; m=4 follows the 2m rule
        return 2 * m + (1 if m in (5, 6) else 0)
    if n == 5:
        return (12 * m) // 5 + 2
    if n == 6:
        return (14 * m) // 5 + (2 if m % 5 in (0, 3, 4) else 3)
    if n == 7:
        return (16 * m) // 5 + (2 if (m == 7 or m % 5 == 0) else 3)
    if n == 8:
        return (18 * m) // 5 + (4 if m % 5 == 3 else 3)
    val = (2 * (n + 1) * (m + 1) - 2) // 5
    if n % 5 == 4 and m % 5 == 4:
        val -= 1
    return val


def _ref_total(n, m):
    if n == 1:
        if m == 1:
            raise OutOfTable("total domination of a single vertex is infeasible")
        return m // 2 + (0 if m % 4 == 0 else 1)
    if n == 2:
        return (2 * m + 2) // 3 + (1 if m % 3 == 1 else 0)
    if n == 3:
        # published as "n"; resolved to m and checked against the solver
        return m
    if n == 4:
        return (6 * m + 3) // 5 + (2 if m % 5 in (0, 3) else 1)
    if n == 5:
        return (6 * m + 3) // 4 + (2 if m % 4 == 0 else 1)
    if n == 6:
        if m % 7 == 5:
            return (12 * m) // 7 + 4
        if m % 7 in (1, 2, 3):
            return (12 * m) // 7 + 3
        return (12 * m) // 7 + 2
    if n == 7:
        # stray "n mod 2" read as a condition on m
        return 2 * m + (2 if (m % 2 == 0 or m in (9, 11, 15, 21)) else 1)
    if n == 8:
        if m % 9 in (0, 7) and m not in (9, 16):
            return (20 * m + 6) // 9 + 4
        if m % 9 in (2, 3, 4, 5):
            return (20 * m + 6) // 9 + 3
        return (20 * m + 6) // 9 + 2
    if n == 9:
        # the fallback branch's "/3" is a misprint for "/4"
        return (10 * m + 3) // 4 + (3 if m % 4 == 2 else 2)
    if n == 10:
        if m % 11 == 9 and m != 20:
            return (30 * m + 1) // 11 + 6
        if m % 11 in (2, 5, 7) and m not in (13, 18):
            return (30 * m + 1) // 11 + 5
        if m % 11 in (0, 1, 3, 6) or m == 20:
            return (30 * m + 1) // 11 + 4
        return (30 * m + 1) // 11 + 3
    if n == 11:
        if m in (12, 22):
            return 3 * m + 4
        if m in (13, 15, 17, 19, 23, 27, 29, 33, 37, 43, 47, 57):
            return 3 * m + 3
        return 3 * m + 2
    if n == 12:
        if m % 13 in (0, 11) and m not in (13, 24, 26, 37):
            return (42 * m + 9) // 13 + 6
        if m % 13 in (2, 4, 7, 9) and m not in (15, 17, 20):
            return (42 * m + 9) // 13 + 5
        if m % 13 in (3, 5, 6, 8) or m in (13, 24, 26, 37):
            return (42 * m + 9) // 13 + 4
        return (42 * m + 9) // 13 + 3
    if n == 13:
        if m in (14, 26):
            return (14 * m + 3) // 4 + 5
        if m % 4 == 0 or m == 19:
            return (14 * m + 3) // 4 + 4
        return (14 * m + 3) // 4 + 3
    if n == 14:
        if m % 15 == 13 and m not in (28, 43):
            return (56 * m + 2) // 15 + 8
        if m % 15 in (2, 9, 11) and m not in (17, 24, 26, 32, 41):
            return (56 * m + 2) // 15 + 7
        if (m % 15 in (0, 5, 6, 7) and m not in (15, 21, 22, 30)) or m in (28, 43):
            return (56 * m + 2) // 15 + 6
        if m % 15 in (1, 3, 4, 10) or m in (17, 24, 26, 32, 41):
            return (56 * m + 2) // 15 + 5
        return (56 * m + 2) // 15 + 4
    if n == 15:
        if m in (16, 30):
            return 4 * m + 6
        if m in (21, 23):
            return 4 * m + 5
        if (m % 2 == 0) or m in (17, 19, 25, 27, 31, 35, 37, 39, 41, 45, 49, 53,
                                 55, 59, 63, 67, 73, 77, 81, 91, 95, 109):
            return 4 * m + 4
        return 4 * m + 3
    raise OutOfTable(f"total domination table stops at n=15 (got n={n})")


def _ref_dist2(n, m):
    if n == 1:
        return _ceil_div(m, 5)
    if n == 2:
        return (m + 4) // 4
    if n == 3:
        return _ceil_div(m, 3)
    if n == 4:
        return (3 * m) // 7 + (1 if m % 7 in (0, 1, 3, 5) else 2)
    if n == 5:
        return (m + 1) // 2 + (0 if m % 6 == 1 else 1)
    if n == 6:
        # m=7 is an isolated exception the published case list misses
        return (3 * m) // 5 + (2 if (m % 5 == 3 or m == 7) else 1)
    if n == 7:
        return 7 if m == 9 else (2 * m) // 3 + 2
    if n == 8:
        if m == 13:
            return 12
        return (3 * m) // 4 + (1 if m % 8 in (4, 7) else 2)
    if n == 9:
        if m in (11, 18):
            return (5 * m) // 6 + 1
        if m % 6 in (2, 3) and m not in (4, 15, 20, 21, 27, 32, 39):
            return (5 * m) // 6 + 3
        return (5 * m) // 6 + 2
    if n == 10:
        return (10 * m) // 11 + (3 if m % 11 in (2, 3, 5, 8) else 2)
    if n == 11:
        good = (1, 4, 6, 7, 9, 11, 14, 16, 17, 19, 21, 24, 26, 27, 29, 0)
        return m + (1 if m % 30 in good else 2)
    if n == 12:
        if m % 14 == 11 and m != 25:
            return (15 * m) // 14 + 4
        if m % 14 in (1, 4, 7) or m in (14, 17, 19, 28):
            return (15 * m) // 14 + 2
        return (15 * m) // 14 + 3
    if n == 13:
        if m % 13 == 5 and m != 31:
            return (15 * m) // 13 + 4
        if (m != 13 and m % 13 in (0, 2, 3, 6, 8, 10, 11, 12)) or m == 31:
            return (15 * m) // 13 + 3
        return (15 * m) // 13 + 2
    if n == 14:
        if m % 17 == 1 or m in (23, 30, 47):
            return (21 * m) // 17 + 2
        if m == 36 or (m > 46 and m % 17 in (2, 3, 8, 11, 14, 16)
                       and m not in (54, 59, 71)):
            return (21 * m) // 17 + 4
        return (21 * m) // 17 + 3
    if n == 15:
        if m % 16 in (1, 4, 7):
            return (21 * m) // 16 + 2
        if m % 16 in (2, 3, 5, 8) and m not in (19, 21):
            return (21 * m) // 16 + 4
        return (21 * m) // 16 + 3
    raise OutOfTable(f"distance-2 table stops at n=15 (got n={n})")


def reference_formula(problem: str, n: int, m: int) -> int:
    """Published closed-formula value for the given problem and grid."""
    if n > m:
        n, m = m, n
    if problem == "2dom":
        if n < 1:
            raise OutOfTable("n must be positive")
        return _ref_2dom(n, m)
    if problem == "roman":
        return _ref_roman(n, m)
    if problem in ("total", "ab:1,1"):
        return _ref_total(n, m)
    if problem == "dist2":
        return _ref_dist2(n, m)
    if problem == "dom":
        if n >= 16:
            return _ceil_div((n + 2) * (m + 2), 5) - 4
        raise OutOfTable("domination reference covers n, m >= 16 only")
    raise OutOfTable(problem)
