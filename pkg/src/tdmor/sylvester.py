"""Sparse-dense Sylvester solvers and dense Lyapunov equations.

The production path for ``A V - E V S = B L`` (and the variant with the
roles of E and A swapped) diagonalizes the small matrix S and reduces the
problem to shifted linear solves, one per eigenvalue; complex-conjugate
pairs fold back to a real solution.  Defective or badly conditioned S
falls back to a complex Schur sweep with back-substitution across the
triangular coupling.  A dense Kronecker-product solver doubles as the
reference oracle for tests.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import (
    ShiftHitsSpectrum,
    SingularSystem,
    SylvesterResidualLarge,
    UnstablePencil,
)

__all__ = [
    "SylvesterProblem",
    "KroneckerResult",
    "GramianFactor",
    "solve_sylvester",
    "solve_kronecker_oracle",
    "solve_lyapunov_dense",
    "vec",
    "unvec",
]

_EIGVEC_COND_LIMIT = 1e8
_RESIDUAL_LIMIT = 1e-8


@dataclass(frozen=True)
class SylvesterProblem:
    """Data of A V - E V S = B L (standard) or E V - A V S = B L (swapped)."""

    A: object
    E: object
    S: np.ndarray
    L: np.ndarray
    B: np.ndarray
    orientation: str = "standard"

    def __post_init__(self):
        if self.orientation not in ("standard", "swapped"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        S = np.atleast_2d(np.asarray(self.S, dtype=float))
        L = np.asarray(self.L, dtype=float).reshape(-1)
        if S.shape[0] != S.shape[1] or L.shape[0] != S.shape[0]:
            raise ValueError("S must be square and L of matching length")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "B", np.asarray(self.B, dtype=float).reshape(-1))


@dataclass(frozen=True)
class KroneckerResult:
    """Solution of the vectorized small-times-large linear system."""

    V: np.ndarray
    singular: bool
    residual: float


@dataclass(frozen=True)
class GramianFactor:
    """Low-rank-ish factor Z with Gramian = Z Z^T."""

    Z: np.ndarray
    side: str

    @property
    def gramian(self):
        return self.Z @ self.Z.T


def vec(X):
    """Column-stacking vectorization."""
    return np.asarray(X).reshape(-1, order="F")


def unvec(x, n, r):
    """Inverse of :func:`vec` for an n-by-r matrix."""
    return np.asarray(x).reshape((n, r), order="F")


def _shift_solver_factory(A, E, swapped):
    """Return ``get(shift) -> solve`` with one factorization per distinct shift."""
    sparse = sp.issparse(A) or sp.issparse(E)
    if sparse:
        A = sp.csc_matrix(A)
        E = sp.csc_matrix(E)
    cache = {}

    def get(shift):
        if shift in cache:
            return cache[shift]
        M = (E - shift * A) if swapped else (A - shift * E)
        try:
            if sparse:
                lu = spla.splu(sp.csc_matrix(M.astype(complex)))
                solve = lu.solve
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", sla.LinAlgWarning)
                    lu_piv = sla.lu_factor(np.asarray(M, dtype=complex))
                if np.any(np.diagonal(lu_piv[0]) == 0.0):
                    raise ShiftHitsSpectrum(f"shift {shift} hits the pencil spectrum")
                solve = lambda rhs: sla.lu_solve(lu_piv, rhs)  # noqa: E731
        except (RuntimeError, sla.LinAlgError) as exc:
            raise ShiftHitsSpectrum(f"shift {shift} hits the pencil spectrum") from exc
        cache[shift] = solve
        return solve

    return get


def _residual(prob, V):
    A, E, S, L, B = prob.A, prob.E, prob.S, prob.L, prob.B
    R = np.outer(B, L)
    if prob.orientation == "standard":
        res = (A @ V) - (E @ V) @ S - R
    else:
        res = (E @ V) - (A @ V) @ S - R
    denom = np.linalg.norm(R)
    return np.linalg.norm(res) / denom if denom > 0 else np.linalg.norm(res)


def solve_sylvester(prob):
    """Solve the Sylvester problem; returns a real n-by-r matrix.

    Eigendecomposition of S exposes the rational-Krylov structure (the
    shifts are the eigenvalues of S); when S is defective or its
    eigenvector matrix has condition above 1e8, a complex Schur sweep is
    used instead.  The relative residual is verified to be below 1e-8.

    Raises
    ------
    ShiftHitsSpectrum
        When a shift coincides with a generalized eigenvalue of (A, E).
    SylvesterResidualLarge
        When the internal residual check fails.
    """
    S, L, B = prob.S, prob.L, prob.B
    r = S.shape[0]
    n = prob.B.shape[0]
    swapped = prob.orientation == "swapped"
    get_solver = _shift_solver_factory(prob.A, prob.E, swapped)

    X = None
    try:
        lam, X = np.linalg.eig(S)
        if np.linalg.cond(X) > _EIGVEC_COND_LIMIT:
            X = None
    except np.linalg.LinAlgError:
        X = None

    if X is not None:
        LX = L.astype(complex) @ X
        Y = np.empty((n, r), dtype=complex)
        for j in range(r):
            Y[:, j] = get_solver(complex(lam[j]))(B.astype(complex) * LX[j])
        V = Y @ np.linalg.inv(X)
    else:
        T, Q = sla.schur(S, output="complex")
        Lq = L.astype(complex) @ Q
        Vt = np.zeros((n, r), dtype=complex)
        AE = prob.E if not swapped else prob.A
        for j in range(r):
            rhs = B.astype(complex) * Lq[j]
            if j > 0:
                rhs = rhs + AE @ (Vt[:, :j] @ T[:j, j])
            Vt[:, j] = get_solver(complex(T[j, j]))(rhs)
        V = Vt @ Q.conj().T

    V = np.ascontiguousarray(V.real) if np.isrealobj(prob.B) else V
    rel = _residual(prob, V)
    if not np.isfinite(rel) or rel >= _RESIDUAL_LIMIT:
        raise SylvesterResidualLarge(
            f"relative Sylvester residual {rel:.3e} exceeds {_RESIDUAL_LIMIT:.0e}"
        )
    return V


def solve_kronecker_oracle(A, E, E_small, A_small, F, cond_limit=1e12):
    """Direct dense solve of (E_small^T (x) A + A_small^T (x) E) vec(V) = vec(F).

    Reference implementation for tests; restricted to n*r <= 5000.  A
    singular system is reported through the ``singular`` flag and solved
    in the least-squares / minimum-norm sense.
    """
    Ad = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    Ed = E.toarray() if sp.issparse(E) else np.asarray(E, dtype=float)
    Ad = np.atleast_2d(Ad)
    Ed = np.atleast_2d(Ed)
    E_small = np.atleast_2d(np.asarray(E_small, dtype=float))
    A_small = np.atleast_2d(np.asarray(A_small, dtype=float))
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n = Ad.shape[0]
    r = E_small.shape[0]
    if n * r > 5000:
        raise ValueError(f"oracle limited to n*r <= 5000, got {n * r}")
    if F.shape != (n, r):
        F = F.reshape((n, r))
    M = np.kron(E_small.T, Ad) + np.kron(A_small.T, Ed)
    f = vec(F)
    singular = False
    if n * r <= 2000:
        singular = np.linalg.cond(M) > cond_limit
    x = None
    if not singular:
        try:
            x = sla.solve(M, f)
        except sla.LinAlgError:
            singular = True
        else:
            if np.linalg.norm(M @ x - f) > 1e-6 * max(np.linalg.norm(f), 1.0):
                singular = True
    if singular:
        x = np.linalg.lstsq(M, f, rcond=None)[0]
    V = unvec(x, n, r)
    res = np.linalg.norm(M @ x - f) / max(np.linalg.norm(f), 1e-300)
    return KroneckerResult(V=V, singular=singular, residual=float(res))


def solve_lyapunov_dense(A, E, rhs_factor, side, assume_stable=False):
    """Gramian factor of one generalized Lyapunov equation.

    ``side="controllability"`` solves A P E^T + E P A^T = -B B^T for
    P = Z Z^T with ``rhs_factor = B``; ``side="observability"`` solves
    A^T P E + E^T P A = -C^T C with ``rhs_factor = C``.  The generalized
    equation is reduced with E to a standard Lyapunov equation, solved by
    the dense Bartels-Stewart routine, and factored by eigendecomposition
    with negative eigenvalues clipped at -1e-12.

    Raises
    ------
    UnstablePencil
        If a finite pencil eigenvalue has nonnegative real part (skipped
        when ``assume_stable``).
    SingularSystem
        If E cannot be factorized.
    """
    if side not in ("controllability", "observability"):
        raise ValueError(f"unknown side {side!r}")
    Ad = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    Ed = E.toarray() if sp.issparse(E) else np.asarray(E, dtype=float)
    g = np.asarray(rhs_factor, dtype=float).reshape(Ad.shape[0], -1)
    if not assume_stable:
        lam = sla.eigvals(Ad, Ed)
        lam = lam[np.isfinite(lam)]
        if lam.size and lam.real.max() >= 0:
            raise UnstablePencil(
                f"max Re(lambda) = {lam.real.max():.3e}; Lyapunov solve needs a stable pencil"
            )
    try:
        elu = sla.lu_factor(Ed)
    except sla.LinAlgError as exc:
        raise SingularSystem("E is singular; dense Lyapunov path needs invertible E") from exc
    At = sla.lu_solve(elu, Ad)  # E^{-1} A
    if side == "controllability":
        Bt = sla.lu_solve(elu, g)
        P = sla.solve_continuous_lyapunov(At, -(Bt @ Bt.T))
    else:
        # solve for Q = E^T P E, then transform back
        P = sla.solve_continuous_lyapunov(At.T, -(g @ g.T))
    w, U = np.linalg.eigh(0.5 * (P + P.T))
    w[(w < 0) & (w > -1e-12)] = 0.0
    w = np.clip(w, 0.0, None)
    keep = w > 0
    Z = U[:, keep] * np.sqrt(w[keep])
    if side == "observability":
        # back-transform: P_O = E^{-T} Q E^{-1}, so Z_O = E^{-T} Z_Q
        Z = sla.lu_solve(elu, Z, trans=1)
    return GramianFactor(Z=Z, side=side)
