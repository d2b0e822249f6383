"""Exception types shared across the package."""


class DegreeCapError(RuntimeError):
    """Requested polynomial degree exceeds the configured maximum."""


class EvaluationError(ValueError):
    """A function handed to a quadrature rule produced a non-finite value."""


class ConvergenceError(RuntimeError):
    """Node doubling hit its cap before successive estimates agreed.

    Carries the last two estimates so callers can inspect how far apart
    they were.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class IntegrabilityError(ValueError):
    """The requested integral diverges at the stated parameters."""
