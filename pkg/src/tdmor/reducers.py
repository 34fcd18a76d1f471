"""The six reduction algorithms compared by the benchmark harness.

* ``syltdmor1`` / ``syltdmor2``: time-domain reduction via orthogonal
  polynomials, solved through the equivalent Sylvester equations.
* ``moment_matching``: one- and two-sided rational Krylov projection.
* ``irka``: iterative rational Krylov with mirrored-pole shift updates.
* ``balanced_truncation``: square-root method on dense Gramian factors.

All reducers return a :class:`ReductionReport` carrying the reduced model,
the orthonormalized projection bases and solver diagnostics.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import orthopoly
from .exceptions import (
    ProjectedPencilSingular,
    ShiftHitsSpectrum,
    SingularSmallMatrix,
    UnstablePencil,
)
from .linalg import orthonormal_basis
from .lti import Provenance, project
from .sylvester import SylvesterProblem, solve_lyapunov_dense, solve_sylvester

__all__ = [
    "ShiftSet",
    "ReductionReport",
    "rational_krylov_basis",
    "moment_matching",
    "syltdmor1",
    "syltdmor2",
    "irka",
    "balanced_truncation",
]

_DROP_TOL = 1e-13
_PROJECTED_COND_LIMIT = 1e12


@dataclass(frozen=True)
class ShiftSet:
    """Expansion points with multiplicities, closed under conjugation."""

    points: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        mult = np.asarray(self.multiplicities, dtype=int).reshape(-1)
        if pts.shape != mult.shape:
            raise ValueError("points and multiplicities must have equal length")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be positive")
        for s, m in zip(pts, mult):
            if abs(s.imag) > 0:
                match = np.isclose(pts, np.conj(s), rtol=1e-10, atol=1e-12)
                if not np.any(match) or mult[match][0] != m:
                    raise ValueError("shift set must be closed under conjugation")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def total_order(self):
        return int(self.multiplicities.sum())

    @classmethod
    def from_values(cls, values, cluster_rtol=1e-8, imag_atol=None):
        """Cluster raw eigenvalues into a conjugation-closed shift set."""
        vals = np.asarray(values, dtype=complex).reshape(-1)
        if vals.size == 0:
            raise ValueError("need at least one shift")
        scale = max(1.0, np.abs(vals).max())
        atol = imag_atol if imag_atol is not None else 1e-10 * scale
        vals = np.where(np.abs(vals.imag) <= atol, vals.real + 0j, vals)

        def cluster(v):
            reps, counts = [], []
            for x in sorted(v, key=lambda z: (z.real, z.imag)):
                for i, rep in enumerate(reps):
                    if abs(x - rep) <= cluster_rtol * max(1.0, abs(rep)):
                        counts[i] += 1
                        break
                else:
                    reps.append(x)
                    counts.append(1)
            return reps, counts

        points, mults = [], []
        real_reps, real_counts = cluster(vals[vals.imag == 0])
        points += real_reps
        mults += real_counts
        upper = vals[vals.imag > 0]
        lower = vals[vals.imag < 0]
        if upper.size != lower.size:
            raise ValueError("complex shifts are not conjugate-paired")
        up_reps, up_counts = cluster(upper)
        for rep, m in zip(up_reps, up_counts):
            points += [rep, np.conj(rep)]
            mults += [m, m]
        return cls(points=np.array(points), multiplicities=np.array(mults, dtype=int))

    def representatives(self):
        """(shift, multiplicity, is_complex) with Im >= 0, deterministic order."""
        reps = [
            (s, int(m)) for s, m in zip(self.points, self.multiplicities) if s.imag >= 0
        ]
        reps.sort(key=lambda sm: (abs(sm[0].imag), sm[0].real))
        return [(s, m, abs(s.imag) > 0) for s, m in reps]


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of a reduction: model, orthonormal bases, diagnostics."""

    model: object
    basis_V: np.ndarray
    basis_W: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)


def _append_orthonormal(Q, v):
    """Two-pass Gram-Schmidt append; returns (Q, accepted)."""
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return Q, False
    w = v.copy()
    for _ in range(2):
        if Q.shape[1]:
            w = w - Q @ (Q.T @ w)
    nw = np.linalg.norm(w)
    if nw <= _DROP_TOL * nv:
        return Q, False
    return np.hstack([Q, (w / nw)[:, None]]), True


def rational_krylov_basis(sys, shifts, side="input"):
    """Orthonormal basis of the union of rational Krylov subspaces.

    Input side spans the spaces K_m((A - s E)^{-1} E, (A - s E)^{-1} B);
    the output side uses transposes and C.  Conjugate shift pairs fold to
    the real and imaginary parts of the complex directions; pairs are
    processed in ascending order of imaginary magnitude.
    """
    if side not in ("input", "output"):
        raise ValueError(f"unknown side {side!r}")
    A, E = sys.A.tocsc(), sys.E.tocsc()
    b = sys.B
    if side == "output":
        A, E = A.T.tocsc(), E.T.tocsc()
        b = sys.C
    n = A.shape[0]
    Q = np.zeros((n, 0))
    for s, m, is_complex in shifts.representatives():
        try:
            lu = spla.splu(sp.csc_matrix((A - s * E).astype(complex)))
        except RuntimeError as exc:
            raise ShiftHitsSpectrum(f"shift {s} hits the pencil spectrum") from exc
        v = lu.solve(b.astype(complex))
        for k in range(m):
            if k > 0:
                v = lu.solve(E @ v)
            parts = (v.real, v.imag) if is_complex else (v.real,)
            for piece in parts:
                Q, _ = _append_orthonormal(Q, piece)
    return Q


def _match_columns(Q1, Q2):
    k = min(Q1.shape[1], Q2.shape[1])
    return Q1[:, :k], Q2[:, :k]


def moment_matching(sys, shifts, sided="one"):
    """Moment matching at the given shifts.

    One-sided projects with V = W = the output Krylov basis (matching
    r_i moments per shift); two-sided uses the input basis for V and the
    output basis for W (2 r_i moments per shift).

    Raises
    ------
    ProjectedPencilSingular
        If the two-sided projected matrix W^T E V has condition above 1e12.
    """
    if sided not in ("one", "two"):
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    t0 = time.perf_counter()
    Q2 = rational_krylov_basis(sys, shifts, side="output")
    if sided == "one":
        V = W = Q2
    else:
        Q1 = rational_krylov_basis(sys, shifts, side="input")
        V, W = _match_columns(Q1, Q2)
        Er = W.T @ (sys.E @ V)
        cond = np.linalg.cond(Er)
        if not np.isfinite(cond) or cond > _PROJECTED_COND_LIMIT:
            raise ProjectedPencilSingular(
                f"cond(W^T E V) = {cond:.3e} exceeds {_PROJECTED_COND_LIMIT:.0e}"
            )
    method = "omm" if sided == "one" else "tmm"
    prov = Provenance(
        method=method,
        shifts=tuple(map(complex, shifts.points)),
        reduce_seconds=time.perf_counter() - t0,
    )
    model = project(sys, V, W, provenance=prov)
    return ReductionReport(
        model=model,
        basis_V=V,
        basis_W=None if sided == "one" else W,
        diagnostics={"sided": sided, "basis_columns": V.shape[1]},
    )


def _galerkin_report(sys, V_raw, method, family, r, t0_reduce, extra=None):
    Q = orthonormal_basis(V_raw, drop_tol=1e-12)
    prov = Provenance(
        method=method, family=str(family), reduce_seconds=time.perf_counter() - t0_reduce
    )
    model = project(sys, Q, Q, provenance=prov)
    diag = {"requested_order": r, "basis_columns": Q.shape[1]}
    diag.update(extra or {})
    return ReductionReport(model=model, basis_V=Q, basis_W=None, diagnostics=diag)


def syltdmor1(sys, family, r, t0=0.0):
    """Time-domain reduction keeping the initial-condition row (zero state).

    Builds the bordered pair (Etilde, Atilde), reduces the Sylvester
    equation A V Etilde + E V Atilde = F to standard form with
    S = -Atilde inv(Etilde) and L = [0, w] inv(Etilde), solves, and
    Galerkin-projects with the orthonormalized solution.

    Raises
    ------
    SingularSmallMatrix
        If Etilde is singular for this family/order (e.g. Legendre with
        even r).
    """
    t_start = time.perf_counter()
    pair = orthopoly.build_E_tilde(family, r, t0)
    Et, At = pair.E_small, pair.A_small
    s = np.linalg.svd(Et, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise SingularSmallMatrix(
            f"Etilde singular for {pair.family} at r = {r} (t0 = {t0})"
        )
    Einv = np.linalg.inv(Et)
    S = -At @ Einv
    ell = np.concatenate([[0.0], orthopoly.input_weights(family, r, "tdmor1")])
    L = ell @ Einv
    prob = SylvesterProblem(A=sys.A, E=sys.E, S=S, L=L, B=sys.B, orientation="standard")
    V = solve_sylvester(prob)
    return _galerkin_report(
        sys, V, "syltdmor1", pair.family, r, t_start,
        extra={"cond_E_small": float(s[0] / s[-1]), "t0": t0},
    )


def syltdmor2(sys, family, r):
    """Time-domain reduction without the initial-condition row.

    For regular Ehat the standard orientation with S = -inv(Ehat) is
    solved (the shifts are then the expansion points); for singular Ehat
    (Hermite at every order, Legendre/Chebyshev at odd orders) the
    orientation with the roles of E and A swapped and S = -Ehat is used,
    which is always well posed.
    """
    t_start = time.perf_counter()
    pair = orthopoly.build_E_hat(family, r)
    w = orthopoly.input_weights(family, r, "tdmor2")
    try:
        Einv = orthopoly.invert_E_hat(family, r)
    except SingularSmallMatrix:
        prob = SylvesterProblem(
            A=sys.A, E=sys.E, S=-pair.E_small, L=w, B=sys.B, orientation="swapped"
        )
        orientation = "swapped"
    else:
        prob = SylvesterProblem(
            A=sys.A, E=sys.E, S=-Einv, L=w @ Einv, B=sys.B, orientation="standard"
        )
        orientation = "standard"
    V = solve_sylvester(prob)
    return _galerkin_report(
        sys, V, "syltdmor2", pair.family, r, t_start, extra={"orientation": orientation}
    )


def _arnoldi_magnitude_bounds(sys, steps=20, seed=0):
    """Crude [min, max] magnitude estimate of the pencil spectrum via Arnoldi."""
    rng = np.random.default_rng(seed)
    n = sys.n
    steps = min(steps, n)
    lu = spla.splu(sys.E.tocsc())
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    basis = [v]
    H = np.zeros((steps + 1, steps))
    k_done = 0
    for k in range(steps):
        w = lu.solve(sys.A @ basis[k])
        for i, vi in enumerate(basis):
            H[i, k] = vi @ w
            w = w - H[i, k] * vi
        for i, vi in enumerate(basis):
            c = vi @ w
            H[i, k] += c
            w = w - c * vi
        H[k + 1, k] = np.linalg.norm(w)
        k_done = k + 1
        if H[k + 1, k] < 1e-12:
            break
        basis.append(w / H[k + 1, k])
    ritz = np.linalg.eigvals(H[:k_done, :k_done])
    mag = np.abs(ritz)
    mag = mag[mag > 0]
    if mag.size == 0:
        return 1.0, 1.0
    return float(mag.min()), float(mag.max())


def _initial_shifts(sys, r, seed):
    lo, hi = _arnoldi_magnitude_bounds(sys, seed=seed)
    lo = max(lo, 1e-8)
    hi = max(hi, lo)
    return np.logspace(np.log10(lo), np.log10(hi), r).astype(complex)


def _sorted_shifts(s):
    # quantize the real part so conjugate pairs (equal up to roundoff)
    # sort by imaginary part and cannot be split inconsistently
    scale = max(np.abs(s).max(), 1e-300)
    return s[np.lexsort((s.imag, np.round(s.real / scale, 8)))]


def irka(sys, r, init="auto", sided="two", max_iter=100, conv_tol=1e-6, seed=0):
    """Iterative rational Krylov: shifts converge to mirrored reduced poles.

    ``init="auto"`` places r log-spaced real shifts across the magnitude
    range of a 20-step Arnoldi spectral estimate.  Each iteration projects
    at the current shifts and mirrors the reduced poles into the right
    half-plane (reflecting any unstable pole first).  Convergence is the
    relative 2-norm distance between consecutive sorted shift vectors.
    A shift hitting the spectrum triggers a jittered restart, at most 3.
    """
    if sided not in ("one", "two"):
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    t_start = time.perf_counter()
    rng = np.random.default_rng(seed)
    if isinstance(init, ShiftSet):
        shifts = np.repeat(init.points, init.multiplicities).astype(complex)
    elif isinstance(init, str) and init == "auto":
        shifts = _initial_shifts(sys, r, seed)
    else:
        shifts = np.asarray(init, dtype=complex).reshape(-1)
    if shifts.size != r:
        raise ValueError(f"need exactly r = {r} initial shifts, got {shifts.size}")

    restarts = 0
    converged = False
    iterations = 0
    V = W = None
    while True:
        try:
            for it in range(max_iter):
                iterations = it + 1
                sset = ShiftSet.from_values(shifts)
                Q2 = rational_krylov_basis(sys, sset, side="output")
                if sided == "two":
                    Q1 = rational_krylov_basis(sys, sset, side="input")
                    V, W = _match_columns(Q1, Q2)
                else:
                    V = W = Q2
                Er = W.T @ (sys.E @ V)
                Ar = W.T @ (sys.A @ V)
                poles = sla.eigvals(Ar, Er)
                if not np.all(np.isfinite(poles)):
                    raise ShiftHitsSpectrum("reduced pencil produced non-finite poles")
                new = -poles
                new = np.where(new.real < 0, np.abs(new.real) + 1j * new.imag, new)
                if new.size == shifts.size:
                    num = np.linalg.norm(_sorted_shifts(new) - _sorted_shifts(shifts))
                    den = max(np.linalg.norm(shifts), 1e-300)
                    if num / den < conv_tol:
                        shifts = new
                        converged = True
                        break
                shifts = new
            break
        except ShiftHitsSpectrum:
            restarts += 1
            if restarts > 3:
                raise
            shifts = shifts * (1 + 0.05 * rng.uniform(-1, 1, shifts.shape[0]))
    method = "irka" if sided == "two" else "oirka"
    prov = Provenance(
        method=method,
        shifts=tuple(map(complex, shifts)),
        reduce_seconds=time.perf_counter() - t_start,
    )
    model = project(sys, V, W, provenance=prov)
    return ReductionReport(
        model=model,
        basis_V=V,
        basis_W=None if sided == "one" else W,
        diagnostics={
            "converged": converged,
            "iterations": iterations,
            "restarts": restarts,
            "final_shifts": shifts.copy(),
        },
    )


def balanced_truncation(sys, r):
    """Square-root balanced truncation with the full Hankel spectrum reported.

    Raises
    ------
    UnstablePencil
        If the system pencil is not stable.
    """
    t_start = time.perf_counter()
    lam = sla.eigvals(sys.A.toarray(), sys.E.toarray())
    lam = lam[np.isfinite(lam)]
    if lam.size and lam.real.max() >= 0:
        raise UnstablePencil(f"max Re(lambda) = {lam.real.max():.3e}")
    Zc = solve_lyapunov_dense(sys.A, sys.E, sys.B, "controllability", assume_stable=True).Z
    Zo = solve_lyapunov_dense(sys.A, sys.E, sys.C, "observability", assume_stable=True).Z
    U, hsv, Vt = np.linalg.svd(Zo.T @ (sys.E @ Zc))
    r_eff = min(r, int(np.count_nonzero(hsv > hsv[0] * 1e-14)))
    sr = hsv[:r_eff]
    Vp = Zc @ Vt[:r_eff, :].T / np.sqrt(sr)
    Wp = Zo @ U[:, :r_eff] / np.sqrt(sr)
    prov = Provenance(method="bt", reduce_seconds=time.perf_counter() - t_start)
    model = project(sys, Vp, Wp, provenance=prov)
    return ReductionReport(
        model=model,
        basis_V=orthonormal_basis(Vp),
        basis_W=orthonormal_basis(Wp),
        diagnostics={"hsv": hsv, "truncated_order": r_eff},
    )
