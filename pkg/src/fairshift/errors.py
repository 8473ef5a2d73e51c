"""Exception types shared across the package."""


class FairshiftError(Exception):
    """Base class for all package errors."""


class ValidationError(FairshiftError):
    """Invalid argument or configuration value."""


class GeometryError(FairshiftError):
    """Two grids that must share geometry do not."""


class DomainError(FairshiftError):
    """Evaluation requested outside a function's declared domain."""


class NumericError(FairshiftError):
    """Non-finite values encountered during a numeric computation."""


class DegenerateDecomposition(FairshiftError):
    """The positive/negative parts of the density difference carry no mass.

    Signals the identical-distributions regime: callers must fall back to
    the Bayes regressor everywhere.
    """


class AssumptionViolation(FairshiftError):
    """A push-forward measure has atoms; the transport construction needs
    continuous (non-atomic) push-forwards."""


class UnsupportedForFigures(FairshiftError):
    """Figure emission requested for a scenario it cannot handle."""
