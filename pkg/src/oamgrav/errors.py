"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class
so the command-line layer can map numerical/regime problems onto a distinct
exit code without string matching.
"""


class OamgravError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(OamgravError, ValueError):
    """A constructor or function argument is outside its documented domain."""


class OrderCapError(InvalidParameterError):
    """Requested mode order exceeds what the series construction supports."""


class SingularOmegaError(OamgravError, ZeroDivisionError):
    """The generating-function denominator vanished for the given arguments."""


class QuadratureError(OamgravError):
    """A quadrature rule failed its accuracy self-test or its domain is too small."""


class GridTooCoarseError(InvalidParameterError):
    """A sampling grid does not resolve the correlation length."""


class InsufficientSamplesError(InvalidParameterError):
    """Too few realizations were supplied for a statistical estimate."""


class RegimeError(InvalidParameterError):
    """Parameters are outside the regime in which the method is valid."""


class ConvergenceError(OamgravError):
    """An iterative routine hit its iteration cap before reaching tolerance."""


class NoRootError(OamgravError):
    """A bracketing search found no sign change in the allowed interval."""


class OracleMismatchError(OamgravError):
    """A cross-check between two independent computations disagreed."""
