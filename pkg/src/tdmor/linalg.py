"""Dense linear-algebra kernels shared by the reduction algorithms.

Matrices are plain ``numpy.ndarray`` objects.  The generalized eigenvalue
convention throughout the package is ``A v = lambda * B v``, so that the
eigenvalues of a pencil ``(-I, Ehat)`` coincide with the eigenvalues of
``-inv(Ehat)`` whenever ``Ehat`` is regular.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .exceptions import DimensionMismatch, SingularMatrix, SingularPencil, ZeroMatrix

__all__ = [
    "SpectrumResult",
    "solve_dense",
    "orthonormal_basis",
    "generalized_eigenvalues",
    "principal_angles",
    "numerical_rank",
    "condition_2norm",
]

#: |beta| below this multiple of |alpha|+|beta| marks a generalized
#: eigenvalue as infinite.
_INF_EIG_RTOL = 1e-12


@dataclass(frozen=True)
class SpectrumResult:
    """Generalized eigenvalues of a pencil (A, B).

    Attributes
    ----------
    values : complex ndarray
        Eigenvalues; entries flagged infinite hold ``inf + 0j`` and must be
        interpreted through ``infinite_flags``, never by the float value.
    vectors : ndarray or None
        Right eigenvectors, one column per eigenvalue.
    infinite_flags : bool ndarray
        True where B is singular in the corresponding deflating direction.
    """

    values: np.ndarray
    vectors: np.ndarray | None
    infinite_flags: np.ndarray

    @property
    def finite_values(self):
        return self.values[~self.infinite_flags]


def _as_2d(M, name="matrix"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be 2-D and nonempty, got shape {M.shape}")
    return M


def solve_dense(M, RHS):
    """Solve M X = RHS by LU with partial pivoting.

    Raises
    ------
    SingularMatrix
        If an exact zero pivot arises.
    """
    M = _as_2d(M, "M")
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"M must be square, got {M.shape}")
    RHS = np.asarray(RHS)
    if RHS.shape[0] != M.shape[0]:
        raise DimensionMismatch(
            f"RHS has {RHS.shape[0]} rows, expected {M.shape[0]}"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(M)
        except sla.LinAlgError as exc:
            raise SingularMatrix(str(exc)) from exc
    if np.any(np.diagonal(lu) == 0.0):
        raise SingularMatrix("exact zero pivot after partial pivoting")
    return sla.lu_solve((lu, piv), RHS)


def orthonormal_basis(V, drop_tol=1e-12):
    """Orthonormal basis of the numerically significant column span of V.

    Columns whose singular value falls at or below ``drop_tol`` times the
    largest singular value are dropped.

    Raises
    ------
    ZeroMatrix
        If every column is numerically zero.
    """
    V = _as_2d(V, "V")
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise ZeroMatrix("all columns are numerically zero")
    return np.ascontiguousarray(U[:, s > drop_tol * s[0]])


def generalized_eigenvalues(A, B, compute_vectors=False):
    """All lambda with A v = lambda B v, flagging infinite eigenvalues.

    Raises
    ------
    SingularPencil
        If det(A - lambda B) vanishes identically (alpha = beta = 0 on
        some deflating direction).
    """
    A = _as_2d(A, "A")
    B = _as_2d(B, "B")
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"need square pencils of equal order, got {A.shape} and {B.shape}")
    out = sla.eig(A, B, right=compute_vectors, homogeneous_eigvals=True)
    if compute_vectors:
        (alpha, beta), vectors = out
    else:
        alpha, beta = out
        vectors = None
    mag = np.abs(alpha) + np.abs(beta)
    scale = max(np.abs(A).max(), np.abs(B).max(), 1.0)
    if np.any(mag <= _INF_EIG_RTOL * scale):
        raise SingularPencil("pencil is singular: det(A - lambda B) == 0 for all lambda")
    infinite = np.abs(beta) <= _INF_EIG_RTOL * mag
    values = np.full(alpha.shape, np.inf + 0j, dtype=complex)
    values[~infinite] = alpha[~infinite] / beta[~infinite]
    return SpectrumResult(values=values, vectors=vectors, infinite_flags=infinite)


def principal_angles(U, W):
    """Principal angles between the column spans of U and W, ascending.

    Uses the sine-based refinement of scipy's ``subspace_angles`` so angles
    near zero keep full precision; values are clipped to [0, pi/2].
    """
    U = _as_2d(U, "U")
    W = _as_2d(W, "W")
    if U.shape[0] != W.shape[0]:
        raise DimensionMismatch(f"row counts differ: {U.shape[0]} vs {W.shape[0]}")
    theta = sla.subspace_angles(U, W)
    return np.sort(np.clip(theta, 0.0, np.pi / 2))


def numerical_rank(M, tol, mode="relative"):
    """Number of singular values above the threshold.

    ``mode="relative"`` counts sigma > tol * sigma_max; ``mode="absolute"``
    counts sigma > tol.  The absolute mode exists for reproducing rank
    decisions made against a fixed cutoff far below machine precision.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if mode not in ("relative", "absolute"):
        raise ValueError(f"unknown mode {mode!r}")
    s = np.linalg.svd(_as_2d(M, "M"), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cut = tol * s[0] if mode == "relative" else tol
    return int(np.count_nonzero(s > cut))


def condition_2norm(M):
    """sigma_max / sigma_min; +inf when sigma_min is exactly zero."""
    M = _as_2d(M, "M")
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"M must be square, got {M.shape}")
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])
