"""Errors raised by the geometry kernel, the formulas and the optimizers."""


class CevianError(Exception):
    """Base class of every domain error."""


class DegenerateSimplex(CevianError):
    """Raised when the vertices of a simplex are (numerically) affinely dependent."""


class DimensionMismatch(CevianError):
    """Raised when a point and a simplex do not live in the same dimension."""


class NotInterior(CevianError):
    """Raised when a point is on the boundary of the simplex or outside of it."""


class IndexOutOfRange(CevianError):
    """Raised for a vertex index outside 0..n."""


class UnsupportedDimension(CevianError):
    """Raised when n is below the smallest dimension a formula is defined for."""


class NonPositiveDepth(CevianError):
    """Raised when a continued fraction is truncated at depth < 1."""


class OutOfDomain(CevianError):
    """Raised when the 1-D objective is evaluated outside (0, 1/n)."""


class ConvergenceFailure(CevianError):
    """Raised when an optimizer can't reach its tolerance."""


class SamplingFailure(CevianError):
    """Raised when a rejection sampler keeps rejecting."""


class InvalidSetting(CevianError):
    """Raised when a tolerance or a restart count is out of range."""
