"""Exception hierarchy shared by all jcth modules."""

from __future__ import annotations


class JCTHError(Exception):
    """Base class for every error raised by jcth."""


class ParameterError(JCTHError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ShapeError(JCTHError, ValueError):
    """Operands have incompatible dimensions."""


class DimensionLimitError(JCTHError):
    """A requested Hilbert-space dimension exceeds the configured maximum."""

    def __init__(self, requested: int, limit: int):
        super().__init__(f"requested dimension {requested} exceeds the limit {limit}")
        self.requested = requested
        self.limit = limit


class ConvergenceError(JCTHError):
    """The eigenvalue iteration did not converge.

    ``partial`` carries whatever could be salvaged (eigenvalues only, or None).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class PreconditionError(JCTHError, ValueError):
    """An operator fails a structural precondition (hermiticity, grading, ...)."""


class PositivityError(JCTHError, ValueError):
    def __init__(self, eigenvalue: float):
        super().__init__(f"matrix is not positive definite: eigenvalue {eigenvalue:.6g}")
        self.eigenvalue = eigenvalue


class UnsupportedRepresentationError(JCTHError, ValueError):
    pass


class RepresentationError(JCTHError, ValueError):
    pass


class AlgebraMismatchError(JCTHError, ValueError):
    pass


class CatalogError(JCTHError, ValueError):
    """Unknown model kind or a kind/option combination the catalog does not offer."""


class UnsupportedError(JCTHError, ValueError):
    """The requested quantity has no closed form for this model."""


class SingularParameterError(JCTHError, ValueError):
    pass


class RegimeError(JCTHError, ValueError):
    """The operation requires a different coupling regime (sign of beta)."""


class NotBlockDiagonalError(JCTHError):
    def __init__(self, residual: float):
        super().__init__(f"operator does not commute with the excitation number (residual {residual:.3e})")
        self.residual = residual


class DefectiveMatrixError(JCTHError):
    pass


class CoverageError(JCTHError):
    def __init__(self, message: str, unmatched=()):
        super().__init__(message)
        self.unmatched = list(unmatched)


class RangeError(JCTHError, ValueError):
    def __init__(self, requested: int, maximum: int):
        super().__init__(f"level {requested} requested but the family supports at most level {maximum}")
        self.requested = requested
        self.maximum = maximum


class ConfigError(JCTHError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class WriteError(JCTHError, OSError):
    pass
