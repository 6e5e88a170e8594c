"""Exception hierarchy shared across the package."""


class RatioMemError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RatioMemError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NoSurvivalError(DomainError):
    """A predator's maximal birth rate does not exceed its death rate."""


class SingularStateError(DomainError):
    """State on the singular boundary (prey or memory variable is zero)."""


class NoPositiveEquilibriumError(RatioMemError):
    """Prey growth cannot balance total predation: no interior equilibrium."""


class UnsupportedDimensionError(RatioMemError):
    """Operation only defined for a specific predator count."""


class InapplicableError(RatioMemError):
    """A structural precondition of an analysis does not hold."""


class NumericFailureError(RatioMemError):
    """A numerical routine failed to converge or lost too much accuracy."""


class IntegrationAborted(NumericFailureError):
    """Time integration stopped early; carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepUnderflowError(IntegrationAborted):
    """Step size collapsed below the resolvable span (stiffness or blow-up)."""


class PositivityFloorError(IntegrationAborted):
    """An accepted state fell below the positivity floor."""


class BudgetExceededError(RatioMemError):
    """Wall-clock budget for a request was exhausted."""
