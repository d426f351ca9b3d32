"""Exception types shared across the package."""


class AbdiracError(Exception):
    """Base class for package errors."""


class DomainError(AbdiracError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation exactly at a pole (e.g. Gamma at a nonpositive integer)."""


class ParameterError(DomainError):
    """Parameter combination outside a formula's validity range."""


class DivergenceError(DomainError):
    """A quantity that diverges for the requested parameters."""


class ConvergenceError(AbdiracError, RuntimeError):
    """An iterative evaluation failed to converge."""
