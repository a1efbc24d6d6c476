"""Shared exception types for peocalc."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GammaPoleError(DomainError):
    """Gamma was evaluated at zero or a negative integer."""


class ConvergenceError(ArithmeticError):
    """A series failed to converge within the configured term budget."""


class ConditioningError(ArithmeticError):
    """Input is too ill-conditioned for the requested algorithm."""
