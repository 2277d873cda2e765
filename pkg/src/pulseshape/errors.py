"""Exception types shared across the package."""


class PulseshapeError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(PulseshapeError, ValueError):
    """An input violates a documented precondition."""


class QuadratureError(PulseshapeError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the best estimate obtained and the achieved error bound so
    callers can decide whether the result is still usable.
    """

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ScenarioError(PulseshapeError, ValueError):
    """A scenario file failed validation; message names the offending key."""
