"""Exact dominating-set counts and growth-rate brackets.

Counting runs the same transfer systems in the (+, x) semiring with exact
big-naturals; no symmetry pruning and no rule optimizations apply.  Growth
rates come from per-height spectral radii: rho(T_n)^(1/n) is a lower bound on
the growth constant, and the same quantity for the border-relaxed language
(rows 0 and n-1 freed of their domination requirement) is an upper bound.
Radii are double precision and not interval-certified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedProblem
from .problems import ABRules, MinimalRules, ProblemSpec, get_problem
from .semiring import spectral_radius, vec_mat
from .solver import TransferSystem, build_system

COUNTABLE = ("dom", "total", "minimal-dom", "minimal-total")


@dataclass(frozen=True)
class CountResult:
    problem: str
    n: int
    m: int
    count: int


@dataclass(frozen=True)
class GrowthBracket:
    problem: str
    height: int
    lower: float
    upper: float
    ratio_estimate: float | None
    uncertified: bool = True


_COUNT_SYSTEMS: dict = {}
_RELAXED_SYSTEMS: dict = {}


def _resolve(problem):
    if isinstance(problem, ProblemSpec):
        name = problem.name
    else:
        name = problem
    if name not in COUNTABLE and not name.startswith("ab:") and name != "roman-unopt" \
            and name not in ("2dom", "dist2"):
        raise UnsupportedProblem(f"counting is not defined for {name}")
    return get_problem(name) if not isinstance(problem, ProblemSpec) else problem


def _count_system(spec, n) -> TransferSystem:
    key = (spec.name, n)
    if key not in _COUNT_SYSTEMS:
        _COUNT_SYSTEMS[key] = build_system(spec, n, prune_symmetry=False, threads=1)
    return _COUNT_SYSTEMS[key]


def count_sets(problem, n: int, m: int, system: TransferSystem | None = None) -> CountResult:
    """Exact number of dominating sets of the given kind on the n x m grid."""
    spec = _resolve(problem)
    sys_ = system or _count_system(spec, n)
    T = sys_.count_matrix()
    v = [1 if f else 0 for f in sys_.first]
    for _ in range(m - 1):
        v = vec_mat(v, T)
    total = sum(v[i] for i in range(sys_.dim) if sys_.end[i])
    return CountResult(spec.name, n, m, total)


def _relaxed_spec(spec: ProblemSpec) -> ProblemSpec:
    """Variant whose first and last rows carry no domination requirement."""
    rules = spec.rules
    if isinstance(rules, ABRules):
        relaxed = ABRules(rules.a, rules.b, relaxed_border=True)
    elif isinstance(rules, MinimalRules):
        relaxed = MinimalRules(rules.total, relaxed_border=True)
    else:
        raise UnsupportedProblem(f"no relaxed variant for {spec.name}")
    return ProblemSpec(f"relaxed:{spec.name}", relaxed, spec.window)


def _relaxed_system(spec, n) -> TransferSystem:
    key = (spec.name, n)
    if key not in _RELAXED_SYSTEMS:
        _RELAXED_SYSTEMS[key] = build_system(
            _relaxed_spec(spec), n, prune_symmetry=False, threads=1
        )
    return _RELAXED_SYSTEMS[key]


def language_radius(problem, n: int, relaxed: bool = False) -> float:
    """Spectral radius of the (0/1) transfer matrix at height n."""
    spec = _resolve(problem)
    sys_ = _relaxed_system(spec, n) if relaxed else _count_system(spec, n)
    return spectral_radius(sys_.count_matrix().support_csr().astype(float))


def growth_bounds(problem, n: int, with_ratio: bool = True) -> GrowthBracket:
    """Bracket for the growth constant nu at height n.

    lower = rho(T_n)^(1/n); upper = rho(T*_n)^(1/n) with the first and last
    rows' requirements relaxed (needs n >= 3); ratio_estimate compares the
    radii at heights n-1 and n and converges to nu much faster than the
    bracket closes.
    """
    spec = _resolve(problem)
    if n < 3:
        raise UnsupportedProblem("the relaxed upper bound needs n >= 3")
    lower = language_radius(spec, n) ** (1.0 / n)
    upper = language_radius(spec, n, relaxed=True) ** (1.0 / n)
    ratio = None
    if with_ratio and n >= 2:
        ratio = language_radius(spec, n) / language_radius(spec, n - 1)
    return GrowthBracket(spec.name, n, lower, upper, ratio)
