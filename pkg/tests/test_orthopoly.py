import numpy as np
import pytest

from tdmor.exceptions import SingularSmallMatrix, UndefinedCoefficient
from tdmor.orthopoly import (
    FAMILIES,
    PolynomialFamily,
    build_E_hat,
    build_E_tilde,
    eval_poly,
    g0_over_g1dot,
    input_weights,
    invert_E_hat,
    is_regular_E_hat,
    is_regular_E_tilde,
    recurrence_coeffs,
)


class TestRecurrenceCoeffs:
    def test_legendre_row(self):
        t = recurrence_coeffs("legendre", 3)
        assert (t.alpha, t.beta, t.gamma) == (1 / 7, 0.0, -1 / 7)

    def test_laguerre_constant(self):
        for i in (1, 2, 17):
            t = recurrence_coeffs("laguerre", i)
            assert (t.alpha, t.beta, t.gamma) == (-1.0, 1.0, 0.0)

    def test_hermite(self):
        assert recurrence_coeffs("hermite", 2).alpha == 1 / 6

    def test_jacobi_zero_params_match_legendre(self):
        for i in range(1, 20):
            j = recurrence_coeffs(PolynomialFamily("jacobi", 0.0, 0.0), i)
            l = recurrence_coeffs("legendre", i)
            assert j.alpha == pytest.approx(l.alpha)
            assert j.beta == pytest.approx(l.beta)
            assert j.gamma == pytest.approx(l.gamma)

    def test_chebyshev1_gamma_undefined_at_one(self):
        with pytest.raises(UndefinedCoefficient):
            recurrence_coeffs("chebyshev1", 1)

    def test_alpha_never_zero(self):
        fams = [f for f in FAMILIES if f != "jacobi"] + [
            PolynomialFamily("jacobi", 0.5, -0.25)
        ]
        for fam in fams:
            for i in range(1, 51):
                if fam == "chebyshev1":
                    # gamma_1 is undefined but alpha_1 exists
                    from tdmor.orthopoly import _alpha

                    assert _alpha(PolynomialFamily(fam), i) != 0
                else:
                    assert recurrence_coeffs(fam, i).alpha != 0


class TestEvalPoly:
    def test_degree_zero_constant(self):
        for fam in FAMILIES:
            for t in (-1.3, 0.0, 2.5):
                assert eval_poly(fam, 0, t) == 1.0

    def test_chebyshev1_t2(self):
        assert eval_poly("chebyshev1", 2, 0.5) == pytest.approx(-0.5)

    def test_laguerre_l1_at_zero(self):
        assert eval_poly("laguerre", 1, 0.0) == pytest.approx(1.0)

    def test_differential_recurrence_holds(self):
        # g_i = alpha_i g'_{i+1} + beta_i g'_i + gamma_i g'_{i-1}, derivatives
        # by central differences
        h = 1e-6
        for fam in ("legendre", "chebyshev2", "hermite", "laguerre"):
            for i in (1, 2, 4):
                for t in (0.15, 0.62):
                    c = recurrence_coeffs(fam, i)

                    def d(k, t=t):
                        return (eval_poly(fam, k, t + h) - eval_poly(fam, k, t - h)) / (2 * h)

                    rhs = c.alpha * d(i + 1) + c.beta * d(i) + c.gamma * d(i - 1)
                    assert rhs == pytest.approx(eval_poly(fam, i, t), abs=5e-8)


class TestG0OverG1dot:
    @pytest.mark.parametrize(
        "fam,val",
        [
            ("legendre", 1.0),
            ("chebyshev1", 1.0),
            ("chebyshev2", 0.5),
            ("hermite", 0.5),
            ("laguerre", -1.0),
        ],
    )
    def test_values(self, fam, val):
        assert g0_over_g1dot(fam) == pytest.approx(val)

    def test_jacobi(self):
        assert g0_over_g1dot(PolynomialFamily("jacobi", 1.0, 3.0)) == pytest.approx(2 / 6)

    def test_matches_finite_difference(self):
        h = 1e-6
        for fam in FAMILIES:
            g1dot = (eval_poly(fam, 1, h) - eval_poly(fam, 1, -h)) / (2 * h)
            assert g0_over_g1dot(fam) == pytest.approx(1.0 / g1dot, abs=1e-8)


class TestBuildETilde:
    def test_laguerre_r2_display(self):
        Et = build_E_tilde("laguerre", 2, 0.0).E_small.T
        assert np.allclose(Et, [[1.0, 1.0], [1.0, -1.0]])

    def test_legendre_r3_subdiagonal_entry(self):
        Et = build_E_tilde("legendre", 3, 0.0).E_small.T
        assert Et[2, 1] == pytest.approx(-1 / 3)

    def test_a_tilde_block_structure(self):
        pair = build_E_tilde("chebyshev2", 5, 0.0)
        At = pair.A_small.T
        assert At[0, 0] == 0.0
        assert np.allclose(At[1:, 1:], np.eye(4))

    def test_pencil_has_zero_eigenvalue(self):
        # the initial-condition structure forces a zero generalized eigenvalue
        for fam in ("laguerre", "legendre", "chebyshev2"):
            r = 5
            pair = build_E_tilde(fam, r, 0.0)
            import scipy.linalg as sla

            lam = sla.eigvals(-pair.A_small, pair.E_small)
            assert np.min(np.abs(lam)) < 1e-10


class TestBuildEHat:
    def test_laguerre_r3_display(self):
        Eh = build_E_hat("laguerre", 3).E_small
        assert np.allclose(Eh, [[-1, 1, 0], [0, -1, 1], [0, 0, -1]])

    def test_hermite_strictly_upper_triangular(self):
        Eh = build_E_hat("hermite", 3).E_small
        assert np.allclose(np.tril(Eh), 0)
        assert Eh[0, 1] == pytest.approx(-1 / 4)
        assert np.linalg.matrix_rank(Eh) < 3

    def test_legendre_r2_entries_and_regularity(self):
        # Table entries give superdiagonal -alpha_1 = -1/3 and subdiagonal
        # -gamma_2 = 1/5; nonsingular
        Eh = build_E_hat("legendre", 2).E_small
        assert np.allclose(Eh, [[0.0, -1 / 3], [1 / 5, 0.0]])
        assert abs(np.linalg.det(Eh)) > 1e-3

    def test_identity_companion(self):
        assert np.allclose(build_E_hat("legendre", 4).A_small, np.eye(4))


class TestInvertEHat:
    def test_laguerre_closed_form(self):
        inv = invert_E_hat("laguerre", 3)
        assert np.allclose(inv, -np.triu(np.ones((3, 3))))
        Eh = build_E_hat("laguerre", 3).E_small
        assert np.allclose(Eh @ inv, np.eye(3))

    def test_laguerre_high_order_identity(self):
        r = 100
        Eh = build_E_hat("laguerre", r).E_small
        assert np.linalg.norm(Eh @ invert_E_hat("laguerre", r) - np.eye(r)) < 1e-13

    def test_legendre_odd_singular(self):
        with pytest.raises(SingularSmallMatrix):
            invert_E_hat("legendre", 3)

    def test_hermite_always_singular(self):
        for r in (1, 4, 9):
            with pytest.raises(SingularSmallMatrix):
                invert_E_hat("hermite", r)

    def test_legendre_even_residual(self):
        for r in (2, 6, 12):
            Eh = build_E_hat("legendre", r).E_small
            assert np.linalg.norm(Eh @ invert_E_hat("legendre", r) - np.eye(r)) < 1e-10


class TestRegularityTable:
    """Invertibility across families and orders follows the parity rules.

    The exact rational-arithmetic oracle decides the full table; the
    floating-point gates agree wherever the condition number is
    representable (regular Hermite combinations exceed any double
    threshold long before r = 60, which is exactly why the published
    Hermite sweeps stop early).
    """

    @pytest.mark.parametrize("fam", ["legendre", "chebyshev1", "chebyshev2"])
    def test_parity_families_small_r_numerical(self, fam):
        for r in range(2, 21):
            assert is_regular_E_tilde(fam, r) == (r % 2 == 1)
            assert is_regular_E_hat(fam, r) == (r % 2 == 0)

    def test_laguerre_always_regular_numerical(self):
        for r in range(2, 61):
            assert is_regular_E_tilde("laguerre", r)
            assert is_regular_E_hat("laguerre", r)

    def test_hermite_numerical_gates(self):
        for r in range(2, 13):
            assert is_regular_E_tilde("hermite", r) == (r % 2 == 1)
        for r in range(1, 61):
            assert not is_regular_E_hat("hermite", r)

    def test_exact_table_spot_checks(self):
        from tdmor.orthopoly import exact_regularity

        assert exact_regularity("hermite", 59, "tdmor1")
        assert not exact_regularity("hermite", 60, "tdmor1")
        assert not exact_regularity("hermite", 60, "tdmor2")
        assert exact_regularity("legendre", 60, "tdmor2")
        assert not exact_regularity("legendre", 59, "tdmor2")
        assert exact_regularity("laguerre", 60, "tdmor1")
        assert exact_regularity("laguerre", 60, "tdmor2")


class TestInputWeights:
    def test_tdmor2_unit_vector(self):
        assert np.allclose(input_weights("legendre", 4, "tdmor2"), [1, 0, 0, 0])

    def test_tdmor1_length(self):
        assert np.allclose(input_weights("legendre", 3, "tdmor1"), [1, 0])

    def test_scaling_leaves_span_invariant(self):
        # any constant input scale rescales the solution, not its span
        from conftest import random_stable_system

        from tdmor.linalg import principal_angles
        from tdmor.lti import DescriptorSystem
        from tdmor.reducers import syltdmor2

        sys = random_stable_system(20, seed=5)
        rep = syltdmor2(sys, "legendre", 4)
        scaled = DescriptorSystem(E=sys.E, A=sys.A, B=7.0 * sys.B, C=sys.C)
        rep7 = syltdmor2(scaled, "legendre", 4)
        assert principal_angles(rep.basis_V, rep7.basis_V)[-1] < 1e-10
