"""Exception and warning classes."""


class ZenoRateError(Exception):
    """Base class for errors raised by this package."""


class QuadratureDomainError(ZenoRateError, ValueError):
    """An integrand returned a non-finite value inside the integration range."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class PreconditionError(ZenoRateError, ValueError):
    """Input violates a mathematical precondition of the requested operation."""


class SingularResponseError(ZenoRateError, ValueError):
    """The Ohmic response function is singular (zero friction)."""


class NoCrossoverError(ZenoRateError):
    """The rate difference does not change sign on the search window."""

    def __init__(self, message, window=None, delta_at_ends=None):
        super().__init__(message)
        self.window = window
        self.delta_at_ends = delta_at_ends


class SweepError(ZenoRateError):
    """One or more grid points of a sweep failed.

    ``points`` holds the successful results in grid order and ``failures`` the
    ``(t, exception)`` pairs for the rest.
    """

    def __init__(self, message, points, failures):
        super().__init__(message)
        self.points = points
        self.failures = failures


class QuadratureWarning(UserWarning):
    """An integral did not reach the requested tolerance."""


class RangeWarning(UserWarning):
    """An asymptotic formula was evaluated outside its regime of validity."""
