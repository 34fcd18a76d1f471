"""Exception types raised across the toolkit."""


class TdmorError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(TdmorError):
    """Operands have incompatible shapes."""


class SingularMatrix(TdmorError):
    """A dense factorization hit an exact zero pivot."""


class ZeroMatrix(TdmorError):
    """All columns of the input are numerically zero."""


class SingularPencil(TdmorError):
    """det(A - lambda*B) vanishes identically."""


class SingularAtPoint(TdmorError):
    """The evaluation point is a generalized eigenvalue of the pencil."""


class SingularMass(TdmorError):
    """The mass matrix of a second-order system is singular."""


class UndefinedCoefficient(TdmorError):
    """A recurrence coefficient is undefined at the requested index."""


class SingularSmallMatrix(TdmorError):
    """The small polynomial coefficient matrix is not invertible."""


class ShiftHitsSpectrum(TdmorError):
    """A shift coincides with a generalized eigenvalue of (A, E)."""


class SylvesterResidualLarge(TdmorError):
    """The internal residual check of a Sylvester solve failed."""


class SingularSystem(TdmorError):
    """A linear system is singular (no unique solution)."""


class UnstablePencil(TdmorError):
    """The pencil (A, E) has eigenvalues outside the open left half-plane."""


class ProjectedPencilSingular(TdmorError):
    """The projected pencil W^T E V is numerically singular."""


class UnstableReducedPoles(TdmorError):
    """Reduced poles could not be stabilized by mirroring."""


class StepMatrixSingular(TdmorError):
    """The implicit-Euler step matrix (E - tau*A) is singular."""


class GridMismatch(TdmorError):
    """Two trajectories do not share the same time grid."""


class ParseError(TdmorError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class HeaderMismatch(ParseError):
    """A Matrix Market header is not of the supported kind."""


class IndexOutOfRange(ParseError):
    """A coordinate entry lies outside the declared matrix size."""


class ConfigError(TdmorError):
    """An experiment configuration is invalid."""
