"""Property-check suites behind the ``verify`` CLI command.

Four suites:

* ``observability``: numerical ranks of the small-pair observability
  matrices across families and orders (absolute 1e-20 cutoff).  Hermite
  deficiencies are reported without failing; every other supported family
  must reach full rank.
* ``eigdist``: minimal pairwise distance of the expansion points; the
  Legendre/Chebyshev combinations must stay strictly separated.
* ``equivalence``: principal-angle agreement between the time-domain
  bases and rational Krylov bases at the matching expansion points
  (a theorem for the variant without the initial-condition row; reported
  only, never fatal, for the variant with it).
* ``oracle``: Sylvester solver against the dense Kronecker oracle on all
  regular family/variant combinations.

Suites return a :class:`VerifyReport`; ``passed`` reflects only the hard
assertions.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from . import duality, orthopoly
from .exceptions import SingularSmallMatrix
from .linalg import principal_angles
from .lti import DescriptorSystem
from .reducers import ShiftSet, rational_krylov_basis, syltdmor1, syltdmor2
from .sylvester import SylvesterProblem, solve_kronecker_oracle, solve_sylvester

__all__ = [
    "VerifyReport",
    "run_verify",
    "oscillatory_test_system",
    "ring_test_system",
    "SUITES",
]

_EVEN_R_FAMILIES = ("legendre", "chebyshev1", "chebyshev2")


@dataclass
class VerifyReport:
    suite: str
    passed: bool = True
    lines: list = field(default_factory=list)
    points_rows: list = field(default_factory=list)

    def log(self, text, hard_ok=None):
        if hard_ok is False:
            self.passed = False
            text = "FAIL " + text
        self.lines.append(text)


def oscillatory_test_system(n, seed, wmin=1.0, wmax=35.0, damp=1.0):
    """Random stable system with conjugate modes covering [wmin, wmax].

    The spread of lightly damped frequencies keeps rational Krylov bases
    at distinct imaginary shifts numerically full rank, so the
    equivalence checks measure the mathematics rather than conditioning.
    """
    rng = np.random.default_rng(seed)
    m = n // 2
    w = np.linspace(wmin, wmax, m) * (1 + 0.05 * rng.uniform(-1, 1, m))
    d = damp * (0.5 + rng.uniform(0, 1, m))
    blocks = [np.array([[-dd, ww], [-ww, -dd]]) for dd, ww in zip(d, w)]
    if n % 2:
        blocks.append(np.array([[-1.0 - rng.uniform(0, 1)]]))
    A = sla.block_diag(*blocks)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = Q @ A @ Q.T
    return DescriptorSystem(
        E=sp.identity(n, format="csc"),
        A=sp.csc_matrix(A),
        B=rng.standard_normal(n),
        C=rng.standard_normal(n),
    )


def ring_test_system(n, seed, shift=1.0, rho=0.47, excited_pairs=10):
    """Random stable system tailored to a multiplicit shift at ``shift``.

    The input excites ``excited_pairs`` conjugate pole pairs whose images
    mu = 1/(lambda - shift) sit uniformly on a ring inside the stability
    disk |mu + 1/2| < 1/2; the remaining modes stay unexcited.  This keeps
    the order-20 Krylov space at one repeated shift numerically full rank,
    which generic pole layouts cannot (their representation conditioning
    collapses around order 12-15).
    """
    rng = np.random.default_rng(seed)
    psi = (np.arange(excited_pairs) + 0.5) * np.pi / excited_pairs
    psi = psi + 0.02 * rng.uniform(-1, 1, excited_pairs)
    mu = -0.5 + rho * np.exp(1j * psi)
    lam = shift + 1.0 / mu
    npad = n // 2 - excited_pairs
    lam_pad = -1.0 - 3.0 * rng.uniform(0, 1, npad) + 1j * rng.uniform(0, 30, npad)
    blocks = [
        np.array([[l.real, l.imag], [-l.imag, l.real]])
        for l in np.concatenate([lam, lam_pad])
    ]
    A = sla.block_diag(*blocks)
    B = np.zeros(n)
    k = 2 * excited_pairs
    B[:k] = rng.choice([-1.0, 1.0], k) * (1 + 0.2 * rng.uniform(-1, 1, k))
    return DescriptorSystem(
        E=sp.identity(n, format="csc"),
        A=sp.csc_matrix(A),
        B=B,
        C=rng.standard_normal(n),
    )


def _tdmor2_orders(family, rmax):
    if family == "laguerre" or family == "hermite":
        return list(range(1, rmax + 1))
    return list(range(2, rmax + 1, 2))


def _tdmor1_orders(family, rmax):
    if family == "laguerre":
        return list(range(2, rmax + 1))
    return list(range(3, rmax + 1, 2))


def verify_observability(rmax=40):
    rep = VerifyReport(suite="observability")
    fams = list(_EVEN_R_FAMILIES) + ["laguerre", "hermite"]
    for variant, orders_of in (("tdmor2", _tdmor2_orders), ("tdmor1", _tdmor1_orders)):
        for fam in fams:
            worst = 0
            for r in orders_of(fam, rmax):
                S, L = duality.observability_pair(fam, r, variant)
                rank, deficiency = duality.check_observability(S, L)
                worst = max(worst, deficiency)
                if deficiency and fam != "hermite":
                    rep.log(
                        f"{variant} {fam} r={r}: rank deficiency {deficiency}",
                        hard_ok=False,
                    )
            if fam == "hermite":
                rep.log(
                    f"{variant} hermite r<={rmax}: max deficiency {worst} "
                    "(double-precision breakdown, informational)"
                )
            else:
                rep.log(f"{variant} {fam} r<={rmax}: full rank", hard_ok=worst == 0)
    # Jacobi spot check away from the Legendre point
    fam = orthopoly.PolynomialFamily("jacobi", 1.0, 0.5)
    ok = True
    for r in range(2, min(rmax, 15) + 1):
        S, L = duality.observability_pair(fam, r, "tdmor2")
        _, deficiency = duality.check_observability(S, L)
        ok &= deficiency == 0
    rep.log(f"tdmor2 {fam} r<=15: full rank", hard_ok=ok)
    return rep


def verify_eigdist(rmax=200, points_at=40):
    rep = VerifyReport(suite="eigdist")
    for variant, orders_of in (("tdmor2", _tdmor2_orders), ("tdmor1", _tdmor1_orders)):
        for fam in _EVEN_R_FAMILIES:
            dists = []
            for r in orders_of(fam, rmax):
                e = duality.expansion_points(fam, r, variant)
                dists.append(e.min_pairwise_distance)
            ok = all(d > 0 for d in dists)
            rep.log(
                f"{variant} {fam} r<={rmax}: min pairwise distance "
                f"{min(dists):.3e} (all distinct)",
                hard_ok=ok,
            )
    for variant in ("tdmor1", "tdmor2"):
        e = duality.expansion_points("laguerre", min(rmax, 100), variant)
        rep.log(
            f"{variant} laguerre r={min(rmax, 100)}: min distance "
            f"{e.min_pairwise_distance:.3e} (informational)"
        )
    e = duality.expansion_points("hermite", min(rmax, 100), "tdmor2")
    rep.log(
        f"tdmor2 hermite r={min(rmax, 100)}: "
        f"{int(e.infinite_flags.sum())}/{e.r} points at infinity",
        hard_ok=bool(e.infinite_flags.all()),
    )
    # complex-plane data for the scatter figure
    for fam in list(_EVEN_R_FAMILIES) + ["laguerre", "hermite"]:
        for variant in ("tdmor1", "tdmor2"):
            r = points_at if variant == "tdmor2" else points_at - 1
            if fam in _EVEN_R_FAMILIES and variant == "tdmor2" and r % 2:
                r += 1
            try:
                e = duality.expansion_points(fam, r, variant)
            except Exception:
                continue
            for p, isinf in zip(e.points, e.infinite_flags):
                rep.points_rows.append(
                    (fam, variant, e.r, p.real if not isinf else np.nan,
                     p.imag if not isinf else np.nan, int(isinf))
                )
    return rep


def _equivalence_case(sys, fam, r, angle_tol):
    report = syltdmor2(sys, fam, r)
    e = duality.expansion_points(fam, r, "tdmor2")
    shifts = ShiftSet.from_values(e.points[~e.infinite_flags])
    Q = rational_krylov_basis(sys, shifts, side="input")
    if report.basis_V.shape[1] != Q.shape[1]:
        return np.inf
    return principal_angles(report.basis_V, Q)[-1]


def verify_equivalence(n=100, rmax=20, angle_tol=1e-7):
    rep = VerifyReport(suite="equivalence")
    for fam in _EVEN_R_FAMILIES:
        worst = 0.0
        for r in range(2, rmax + 1, 2):
            sys = oscillatory_test_system(n, seed=7 * r + 1)
            worst = max(worst, _equivalence_case(sys, fam, r, angle_tol))
        rep.log(
            f"tdmor2 {fam} even r<={rmax}: max principal angle {worst:.3e}",
            hard_ok=worst < angle_tol,
        )
    worst = 0.0
    for r in range(1, rmax + 1):
        sys = ring_test_system(n, seed=11 * r + 1)
        worst = max(worst, _equivalence_case(sys, "laguerre", r, angle_tol))
    rep.log(
        f"tdmor2 laguerre r<={rmax}: max principal angle {worst:.3e}",
        hard_ok=worst < angle_tol,
    )
    # conjectured equivalence for the variant with the initial-condition row:
    # reported, never fatal.  The zero expansion point carries no input
    # weight under a zero initial state, so the comparison uses the
    # nonzero finite points (the solution spans r-1 directions).
    for fam in _EVEN_R_FAMILIES:
        worst = 0.0
        for r in (3, 5, 7, 9):
            sys = oscillatory_test_system(n, seed=13 * r + 2)
            report = syltdmor1(sys, fam, r)
            e = duality.expansion_points(fam, r, "tdmor1")
            pts = e.points[~e.infinite_flags]
            pts = pts[np.abs(pts) > 1e-8 * max(1.0, np.abs(pts).max())]
            shifts = ShiftSet.from_values(pts)
            Q = rational_krylov_basis(sys, shifts, side="input")
            ang = (
                principal_angles(report.basis_V, Q)[-1]
                if report.basis_V.shape[1] == Q.shape[1]
                else np.inf
            )
            worst = max(worst, ang)
        rep.log(
            f"tdmor1 {fam} odd r<=9: max principal angle {worst:.3e} "
            "(conjectured equivalence over the nonzero points, informational)"
        )
    return rep


def verify_oracle(rel_tol=1e-7):
    rep = VerifyReport(suite="oracle")
    fams = list(_EVEN_R_FAMILIES) + ["laguerre", "hermite", "jacobi"]
    for fam in fams:
        family = (
            orthopoly.PolynomialFamily("jacobi", 0.3, 0.7) if fam == "jacobi" else fam
        )
        for variant in ("tdmor1", "tdmor2"):
            worst = 0.0
            cases = 0
            for r in range(1 if variant == "tdmor2" else 2, 7):
                n = 40
                sys = oscillatory_test_system(n, seed=100 + 17 * r, wmax=20.0)
                try:
                    if variant == "tdmor1":
                        pair = orthopoly.build_E_tilde(family, r)
                        s = np.linalg.svd(pair.E_small, compute_uv=False)
                        if s[-1] <= 1e-12 * s[0]:
                            continue
                        Einv = np.linalg.inv(pair.E_small)
                        ell = np.concatenate(
                            [[0.0], orthopoly.input_weights(family, r, "tdmor1")]
                        )
                        prob = SylvesterProblem(
                            A=sys.A, E=sys.E, S=-pair.A_small @ Einv,
                            L=ell @ Einv, B=sys.B, orientation="standard",
                        )
                        F = np.outer(sys.B, ell)
                    else:
                        pair = orthopoly.build_E_hat(family, r)
                        w = orthopoly.input_weights(family, r, "tdmor2")
                        try:
                            Einv = orthopoly.invert_E_hat(family, r)
                            prob = SylvesterProblem(
                                A=sys.A, E=sys.E, S=-Einv, L=w @ Einv,
                                B=sys.B, orientation="standard",
                            )
                        except SingularSmallMatrix:
                            prob = SylvesterProblem(
                                A=sys.A, E=sys.E, S=-pair.E_small, L=w,
                                B=sys.B, orientation="swapped",
                            )
                        F = np.outer(sys.B, w)
                except SingularSmallMatrix:
                    continue
                V = solve_sylvester(prob)
                oracle = solve_kronecker_oracle(
                    sys.A, sys.E, pair.E_small, pair.A_small, F
                )
                if oracle.singular:
                    continue
                diff = np.linalg.norm(V - oracle.V) / np.linalg.norm(oracle.V)
                worst = max(worst, diff)
                cases += 1
            if cases:
                rep.log(
                    f"{variant} {family} r<=6: max relative difference {worst:.3e} "
                    f"({cases} cases)",
                    hard_ok=worst < rel_tol,
                )
    return rep


SUITES = {
    "observability": verify_observability,
    "eigdist": verify_eigdist,
    "equivalence": verify_equivalence,
    "oracle": verify_oracle,
}


def run_verify(suite, **kwargs):
    """Run one named suite and return its report."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return SUITES[suite](**kwargs)
