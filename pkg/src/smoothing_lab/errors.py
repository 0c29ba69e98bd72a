"""Shared exception types."""

from __future__ import annotations


class SingularPointError(ValueError):
    """Kernel evaluated at a coordinate zero where the weight is singular."""


class InsufficientDataError(ValueError):
    """A fit was requested on data that cannot support it.

    Carries ``smallest_usable_eps`` when the problem is a degenerate
    sublevel curve (some estimates are zero below that threshold).
    """

    def __init__(self, message: str, smallest_usable_eps: float | None = None):
        super().__init__(message)
        self.smallest_usable_eps = smallest_usable_eps


class BudgetExceededError(RuntimeError):
    """A quadrature or sampling budget cannot accommodate the request.

    ``max_feasible_tau`` reports the largest frequency the current budget
    supports, when that is the binding constraint.
    """

    def __init__(self, message: str, max_feasible_tau: float | None = None):
        super().__init__(message)
        self.max_feasible_tau = max_feasible_tau


class ConditioningError(ArithmeticError):
    """A certified constant could not be computed reliably.

    ``sigma_min`` reports the offending smallest singular value.
    """

    def __init__(self, message: str, sigma_min: float | None = None):
        super().__init__(message)
        self.sigma_min = sigma_min
