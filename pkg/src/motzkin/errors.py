"""Exception types shared across the package."""


class MotzkinError(Exception):
    """Base class for all errors raised by this package."""


class NegativeAltitudeError(MotzkinError):
    """An altitude sequence dips below zero."""


class StepTooLargeError(MotzkinError):
    """Consecutive altitudes differ by more than one."""


class CapExceededError(MotzkinError):
    """Requested enumeration exceeds the hard length cap."""


class InvalidParamsError(MotzkinError):
    """Model parameters violate a precondition (e.g. rho0*rho1 >= 1)."""


class InvalidGridError(MotzkinError):
    """An evaluation grid is not strictly increasing or misses endpoints."""


class TruncationInsufficientError(MotzkinError):
    """Certified truncation tail exceeds the requested tolerance."""


class OutOfSupportError(MotzkinError):
    """A conditioning point lies outside the support of a kernel."""


class QuadratureNotConvergedError(MotzkinError):
    """A quadrature error estimate exceeds the requested tolerance."""


class ConditionViolatedError(MotzkinError):
    """Parameters violate the convergence condition of a representation."""
