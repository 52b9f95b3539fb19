"""Domination numbers, loss-method bounds and dominating-set counts on grids."""

from .problems import (
    CellContext,
    CellValue,
    LossModel,
    ProblemSpec,
    cost_of,
    get_problem,
    local_loss,
    problem_names,
    reverse_loss,
)
from .semiring import Recurrence, SparseSemiringMatrix
from .solver import (
    PiecewiseFormula,
    TransferSystem,
    build_system,
    eval_formula,
    find_recurrence,
    gamma,
    gamma_range,
    reference_formula,
    synthesize_formula,
)
from .loss import BandSystem, border_min_loss, build_band, extended_lower_bound, lower_bound
from .counting import CountResult, GrowthBracket, count_sets, growth_bounds
from .rauzy import RauzyGraph, build_rauzy, growth_rate, stabilized_growth

__all__ = [
    "BandSystem", "CellContext", "CellValue", "CountResult", "GrowthBracket",
    "LossModel", "PiecewiseFormula", "ProblemSpec", "RauzyGraph", "Recurrence",
    "SparseSemiringMatrix", "TransferSystem", "border_min_loss", "build_band",
    "build_system", "cost_of", "count_sets", "eval_formula",
    "extended_lower_bound", "find_recurrence", "gamma", "gamma_range",
    "get_problem", "growth_bounds", "growth_rate", "local_loss", "lower_bound",
    "problem_names", "reference_formula", "reverse_loss", "stabilized_growth",
    "synthesize_formula",
]
