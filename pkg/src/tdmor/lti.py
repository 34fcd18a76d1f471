"""Descriptor-system data model, projection, transfer function and moments.

Systems are single-input single-output: ``E x' = A x + B u``, ``y = C x``
with sparse E, A and vector-valued B, C.  The initial state is fixed at
zero throughout the package.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import DimensionMismatch, SingularAtPoint, SingularMass

__all__ = [
    "DescriptorSystem",
    "SecondOrderSystem",
    "ReducedModel",
    "MomentList",
    "transfer_eval",
    "moments",
    "project",
    "lift_second_order",
    "pencil_eigenvalues",
    "is_stable",
]


def _vector(x, n, name):
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != n:
        raise DimensionMismatch(f"{name} must have length {n}, got {x.shape[0]}")
    return x


@dataclass(frozen=True)
class DescriptorSystem:
    """Sparse SISO descriptor system E x' = A x + B u, y = C x."""

    E: sp.csc_matrix
    A: sp.csc_matrix
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        E = sp.csc_matrix(self.E)
        A = sp.csc_matrix(self.A)
        n = A.shape[0]
        if A.shape != (n, n) or E.shape != (n, n):
            raise DimensionMismatch("E and A must be square and of equal order")
        if E.nnz == 0 and A.nnz == 0:
            raise ValueError("E and A must not both be zero")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", _vector(self.B, n, "B"))
        object.__setattr__(self, "C", _vector(self.C, n, "C"))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def order(self):
        return self.A.shape[0]


@dataclass(frozen=True)
class SecondOrderSystem:
    """Second-order system M x'' + D x' + K x = Bin u, y = Cout x."""

    M: sp.csc_matrix
    D: sp.csc_matrix
    K: sp.csc_matrix
    Bin: np.ndarray
    Cout: np.ndarray

    def __post_init__(self):
        M = sp.csc_matrix(self.M)
        D = sp.csc_matrix(self.D)
        K = sp.csc_matrix(self.K)
        m = M.shape[0]
        for name, mat in (("M", M), ("D", D), ("K", K)):
            if mat.shape != (m, m):
                raise DimensionMismatch(f"{name} must be {m}x{m}, got {mat.shape}")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "Bin", _vector(self.Bin, m, "Bin"))
        object.__setattr__(self, "Cout", _vector(self.Cout, m, "Cout"))

    @property
    def m(self):
        return self.M.shape[0]


@dataclass(frozen=True)
class Provenance:
    """How a reduced model was produced."""

    method: str = "unknown"
    family: str | None = None
    shifts: tuple | None = None
    reduce_seconds: float = 0.0


@dataclass(frozen=True)
class ReducedModel:
    """Dense reduced model (Er, Ar, Br, Cr) with provenance."""

    Er: np.ndarray
    Ar: np.ndarray
    Br: np.ndarray
    Cr: np.ndarray
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        Er = np.atleast_2d(np.asarray(self.Er, dtype=float))
        Ar = np.atleast_2d(np.asarray(self.Ar, dtype=float))
        r = Ar.shape[0]
        if Ar.shape != (r, r) or Er.shape != (r, r):
            raise DimensionMismatch("Er and Ar must be square and of equal order")
        Br = _vector(self.Br, r, "Br")
        Cr = _vector(self.Cr, r, "Cr")
        for name, arr in (("Er", Er), ("Ar", Ar), ("Br", Br), ("Cr", Cr)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        object.__setattr__(self, "Er", Er)
        object.__setattr__(self, "Ar", Ar)
        object.__setattr__(self, "Br", Br)
        object.__setattr__(self, "Cr", Cr)

    @property
    def r(self):
        return self.Ar.shape[0]

    @property
    def order(self):
        return self.Ar.shape[0]


@dataclass(frozen=True)
class MomentList:
    """Moments M_0 .. M_k of a transfer function about a base point."""

    base_point: complex
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise ValueError("moments must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def _shifted_solver(sys, s):
    """Return a solve callable for (s E - A) x = rhs, sparse or dense."""
    if isinstance(sys, ReducedModel):
        M = s * sys.Er - sys.Ar.astype(complex)
        try:
            lu, piv = sla.lu_factor(M)
        except sla.LinAlgError as exc:
            raise SingularAtPoint(f"s = {s} is a pole of the reduced pencil") from exc
        if not np.all(np.isfinite(lu)):
            raise SingularAtPoint(f"s = {s} is a pole of the reduced pencil")
        return lambda rhs: sla.lu_solve((lu, piv), rhs)
    M = (s * sys.E - sys.A).tocsc().astype(complex)
    try:
        lu = spla.splu(M)
    except RuntimeError as exc:
        raise SingularAtPoint(f"s = {s} is a generalized eigenvalue of (A, E)") from exc
    return lu.solve


def transfer_eval(sys, s):
    """Evaluate G(s) = C (sE - A)^{-1} B via one linear solve."""
    solve = _shifted_solver(sys, complex(s))
    if isinstance(sys, ReducedModel):
        return complex(sys.Cr @ solve(sys.Br.astype(complex)))
    return complex(sys.C @ solve(sys.B.astype(complex)))


def moments(sys, s0, k):
    """Moments M_j = C (-(s0 E - A)^{-1} E)^j (s0 E - A)^{-1} B, j = 0..k.

    Computed by repeated solves against a single factorization of
    (s0 E - A); this is the brute-force oracle used by the moment-matching
    tests.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    solve = _shifted_solver(sys, complex(s0))
    if isinstance(sys, ReducedModel):
        E, B, C = sys.Er, sys.Br, sys.Cr
    else:
        E, B, C = sys.E, sys.B, sys.C
    v = solve(B.astype(complex))
    vals = [C @ v]
    for _ in range(k):
        v = -solve(E @ v)
        vals.append(C @ v)
    return MomentList(base_point=complex(s0), values=np.array(vals))


def project(sys, V, W=None, provenance=None):
    """Petrov-Galerkin projection: Er = W^T E V, Ar = W^T A V, Br = W^T B, Cr = C V."""
    if W is None:
        W = V
    V = np.atleast_2d(np.asarray(V, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if V.shape[0] != sys.n or W.shape[0] != sys.n:
        raise DimensionMismatch("projection bases must have n rows")
    if V.shape[1] != W.shape[1]:
        raise DimensionMismatch("V and W must have the same number of columns")
    Er = W.T @ (sys.E @ V)
    Ar = W.T @ (sys.A @ V)
    return ReducedModel(
        Er=Er,
        Ar=Ar,
        Br=W.T @ sys.B,
        Cr=sys.C @ V,
        provenance=provenance or Provenance(method="projection"),
    )


def lift_second_order(sos, form="chain"):
    """First-order realization of a second-order system.

    ``form="chain"`` uses E = blkdiag(K, M), A = [[0, K], [-K, -D]];
    ``form="gyro"`` uses E = blkdiag(-K^T, M), A = [[0, -K^T], [-K, -D]],
    which keeps E and A symmetric for symmetric K, D.  Both preserve the
    transfer function Cout (s^2 M + s D + K)^{-1} Bin.
    """
    if form not in ("chain", "gyro"):
        raise ValueError(f"unknown form {form!r}")
    M, D, K = sos.M, sos.D, sos.K
    m = sos.m
    try:
        spla.splu(M.tocsc())
    except RuntimeError as exc:
        raise SingularMass("mass matrix is singular") from exc
    Z = sp.csc_matrix((m, m))
    if form == "chain":
        E = sp.block_diag([K, M], format="csc")
        A = sp.bmat([[Z, K], [-K, -D]], format="csc")
    else:
        E = sp.block_diag([-K.T, M], format="csc")
        A = sp.bmat([[Z, -K.T], [-K, -D]], format="csc")
    B = np.concatenate([np.zeros(m), sos.Bin])
    C = np.concatenate([sos.Cout, np.zeros(m)])
    return DescriptorSystem(E=E, A=A, B=B, C=C)


def pencil_eigenvalues(sys):
    """Dense generalized eigenvalues of (A, E); intended for desk-scale orders."""
    if isinstance(sys, ReducedModel):
        return sla.eigvals(sys.Ar, sys.Er)
    return sla.eigvals(sys.A.toarray(), sys.E.toarray())


def is_stable(sys, margin=0.0):
    """True when all finite pencil eigenvalues lie in Re < -margin."""
    lam = pencil_eigenvalues(sys)
    lam = lam[np.isfinite(lam)]
    return bool(np.all(lam.real < -margin))
