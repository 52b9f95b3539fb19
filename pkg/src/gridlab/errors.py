"""Exception types shared by all engine modules."""


class GridLabError(Exception):
    """Base class for all engine errors."""


class UnknownProblem(GridLabError):
    """Requested problem name is not registered."""


class UnsupportedProblem(GridLabError):
    """The operation is not defined for this problem (e.g. band loss for dist2)."""


class CapacityExceeded(GridLabError):
    """State or pair count exceeds the configured budget."""


class BudgetExceeded(GridLabError):
    """Matrix product fill exceeds the configured memory cap."""


class TooLarge(GridLabError):
    """Brute-force search space exceeds the oracle caps."""


class DimensionTooSmall(GridLabError):
    """Grid too small for the requested border height (needs 2h < min(n, m))."""


class NotPrimitive(GridLabError):
    """Matrix power keeps an infinite entry past a proven-primitivity exponent."""


class NotFound(GridLabError):
    """No recurrence detected within the exponent budget."""


class NoConvergence(GridLabError):
    """Power iteration did not converge within max_iters."""


class InsufficientInitialValues(GridLabError):
    """Formula synthesis needs one full period of values past the validity floor."""


class OutOfTable(GridLabError):
    """Requested (problem, n) is outside the tabulated closed formulas."""
