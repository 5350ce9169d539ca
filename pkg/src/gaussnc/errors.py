"""Exception hierarchy shared by the state, invariant and network layers."""


class GaussNCError(Exception):
    """Base class for every error raised by :mod:`gaussnc`."""


class MalformedStateError(GaussNCError, ValueError):
    """Moment or covariance data that violate the structural invariants
    (non-Hermitian ``N``, non-symmetric ``M``, wrong shapes, bad JSON)."""


class UnphysicalStateError(GaussNCError, ValueError):
    """A state that violates the uncertainty relation ``sigma + i/2 Omega >= 0``."""

    def __init__(self, message, min_eig=None):
        super().__init__(message)
        self.min_eig = min_eig


class DimensionMismatchError(GaussNCError, ValueError):
    """Mode counts of two operands disagree, or an operation got the wrong n."""


class NumericalDomainError(GaussNCError, ArithmeticError):
    """A radicand or logarithm argument left its domain beyond tolerance."""


class NumericalDegeneracyError(GaussNCError, ArithmeticError):
    """The spectrum of ``i Omega sigma`` did not come in +/- pairs."""


class ParameterRangeError(GaussNCError, ValueError):
    """A constructor or scenario parameter is outside its documented range."""
