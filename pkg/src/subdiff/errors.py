"""Exception types raised by the solver and the experiment harness."""


class SubdiffError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(SubdiffError, ValueError):
    pass


class InvalidInputError(SubdiffError, ValueError):
    pass


class DomainError(SubdiffError, ValueError):
    """A parameter lies outside the range where the formula is defined."""


class EvaluationError(SubdiffError, ArithmeticError):
    """A data function produced a non-finite sample."""


class DivergenceError(SubdiffError, ArithmeticError):
    """The time marcher produced a non-finite value."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite value produced at time step n={step}")


class AccuracyWarning(UserWarning):
    """Contour quadrature did not settle under refinement."""
