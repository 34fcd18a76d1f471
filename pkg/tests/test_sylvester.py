import numpy as np
import pytest
import scipy.sparse as sp
from conftest import random_stable_system

from tdmor.exceptions import ShiftHitsSpectrum, UnstablePencil
from tdmor.linalg import principal_angles
from tdmor.orthopoly import build_E_hat, build_E_tilde, input_weights, invert_E_hat
from tdmor.sylvester import (
    GramianFactor,
    SylvesterProblem,
    solve_kronecker_oracle,
    solve_lyapunov_dense,
    solve_sylvester,
    unvec,
    vec,
)


class TestSolveSylvester:
    def test_scalar(self):
        # A V - E V S = B L with A = -1, E = 1, S = 0, L = 1, B = 1 -> V = -1
        prob = SylvesterProblem(
            A=np.array([[-1.0]]), E=np.array([[1.0]]),
            S=np.array([[0.0]]), L=[1.0], B=[1.0],
        )
        assert solve_sylvester(prob) == pytest.approx(np.array([[-1.0]]))

    def test_single_shift_columns(self):
        # diagonal A with a single shift: V holds (A - s E)^{-1} B
        prob = SylvesterProblem(
            A=np.diag([-1.0, -2.0]), E=np.eye(2),
            S=np.array([[1.0]]), L=[1.0], B=[1.0, 1.0],
        )
        V = solve_sylvester(prob)
        assert np.allclose(V, [[-0.5], [-1 / 3]])

    def test_matches_kronecker_oracle_tdmor2(self):
        sys = random_stable_system(40, seed=0)
        r = 4
        Eh = build_E_hat("legendre", r).E_small
        Einv = invert_E_hat("legendre", r)
        w = input_weights("legendre", r, "tdmor2")
        prob = SylvesterProblem(
            A=sys.A, E=sys.E, S=-Einv, L=w @ Einv, B=sys.B, orientation="standard"
        )
        V = solve_sylvester(prob)
        oracle = solve_kronecker_oracle(sys.A, sys.E, Eh, np.eye(r), np.outer(sys.B, w))
        assert not oracle.singular
        assert oracle.residual < 1e-9
        assert np.linalg.norm(V - oracle.V) / np.linalg.norm(oracle.V) < 1e-9

    def test_real_output_with_conjugate_spectrum(self):
        sys = random_stable_system(15, seed=2)
        S = np.array([[0.0, 2.0], [-2.0, 0.0]])  # eigenvalues +-2i
        prob = SylvesterProblem(A=sys.A, E=sys.E, S=S, L=[1.0, 0.0], B=sys.B)
        V = solve_sylvester(prob)
        assert np.isrealobj(V)

    def test_span_equals_rational_krylov_span(self):
        # distinct shifts on the diagonal of S with L = ones span the
        # shifted-resolvent directions
        sys = random_stable_system(25, seed=4)
        shifts = np.array([1.0, 2.0, 5.0])
        prob = SylvesterProblem(
            A=sys.A, E=sys.E, S=np.diag(shifts), L=np.ones(3), B=sys.B
        )
        V = solve_sylvester(prob)
        cols = [
            np.linalg.solve(sys.A.toarray() - s * sys.E.toarray(), sys.B)
            for s in shifts
        ]
        W = np.column_stack(cols)
        assert principal_angles(
            np.linalg.qr(V)[0], np.linalg.qr(W)[0]
        )[-1] < 1e-8

    def test_shift_hits_spectrum(self):
        prob = SylvesterProblem(
            A=np.array([[-1.0]]), E=np.array([[1.0]]),
            S=np.array([[-1.0]]), L=[1.0], B=[1.0],
        )
        with pytest.raises(ShiftHitsSpectrum):
            solve_sylvester(prob)

    def test_defective_small_matrix_uses_schur_sweep(self):
        # single Jordan block at 1: still solvable, matches the oracle
        sys = random_stable_system(12, seed=6)
        r = 3
        S = np.eye(r) + np.diag(np.ones(r - 1), 1)
        L = np.array([1.0, 0.0, 0.0])
        prob = SylvesterProblem(A=sys.A, E=sys.E, S=S, L=L, B=sys.B)
        V = solve_sylvester(prob)
        # oracle on the equivalent equation A V (.) + E V (.) = F:
        # A V - E V S = B L  <=>  A V I + E V (-S) = B L
        oracle = solve_kronecker_oracle(
            sys.A, sys.E, np.eye(r), -S, np.outer(sys.B, L)
        )
        assert np.linalg.norm(V - oracle.V) / np.linalg.norm(oracle.V) < 1e-9


class TestKroneckerOracle:
    def test_scalar_everything(self):
        res = solve_kronecker_oracle(
            np.array([[1.0]]), np.array([[1.0]]),
            np.array([[2.0]]), np.array([[3.0]]), np.array([[5.0]]),
        )
        assert res.V == pytest.approx(np.array([[1.0]]))
        assert not res.singular

    def test_vec_round_trip(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((3, 2))
        assert np.allclose(unvec(vec(X), 3, 2), X)

    def test_tdmor1_with_singular_a_flags_nonuniqueness(self):
        # the tdmor1 pencil always carries a zero expansion point, so the
        # vectorized system degenerates exactly when A itself is singular
        n, r = 6, 3
        A = sp.csc_matrix(np.diag([0.0, -1.0, -2.0, -3.0, -4.0, -5.0]))
        E = sp.identity(n, format="csc")
        B = np.ones(n)
        pair = build_E_tilde("legendre", r, 0.0)
        w = np.concatenate([[0.0], input_weights("legendre", r, "tdmor1")])
        res = solve_kronecker_oracle(A, E, pair.E_small, pair.A_small, np.outer(B, w))
        assert res.singular
        # the least-squares solution is still returned and finite
        assert np.all(np.isfinite(res.V))

    def test_tdmor1_nonsingular_for_generic_stable_system(self):
        # with an invertible A the vectorized tdmor1 system is regular and
        # its unique solution satisfies the reduced (S, L) form as well
        sys = random_stable_system(10, seed=8)
        r = 3
        pair = build_E_tilde("legendre", r, 0.0)
        w = np.concatenate([[0.0], input_weights("legendre", r, "tdmor1")])
        res = solve_kronecker_oracle(
            sys.A, sys.E, pair.E_small, pair.A_small, np.outer(sys.B, w)
        )
        assert not res.singular
        Einv = np.linalg.inv(pair.E_small)
        prob = SylvesterProblem(
            A=sys.A, E=sys.E, S=-pair.A_small @ Einv, L=w @ Einv, B=sys.B
        )
        V = solve_sylvester(prob)
        assert np.linalg.norm(V - res.V) / np.linalg.norm(res.V) < 1e-9

    def test_size_guard(self):
        with pytest.raises(ValueError):
            solve_kronecker_oracle(
                np.eye(200), np.eye(200), np.eye(40), np.eye(40), np.zeros((200, 40))
            )


class TestLyapunov:
    def test_scalar(self):
        f = solve_lyapunov_dense(
            np.array([[-1.0]]), np.array([[1.0]]), [1.0], "controllability"
        )
        assert f.gramian == pytest.approx(np.array([[0.5]]))

    def test_symmetric_system_gramians_coincide(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((12, 12))
        A = -(A @ A.T) - np.eye(12)
        E = np.eye(12)
        B = rng.standard_normal(12)
        Pc = solve_lyapunov_dense(A, E, B, "controllability").gramian
        Po = solve_lyapunov_dense(A, E, B, "observability").gramian
        assert np.allclose(Pc, Po, atol=1e-10)

    def test_generalized_residual_against_kronecker(self):
        # residual of the generalized equation checked through a dense
        # Kronecker solve of A P E^T + E P A^T = -B B^T
        rng = np.random.default_rng(2)
        n = 8
        A = rng.standard_normal((n, n))
        E = np.eye(n) + 0.1 * rng.standard_normal((n, n))
        import scipy.linalg as sla

        lam = sla.eigvals(A, E)
        A = A - (lam.real.max() + 1.0) * E
        B = rng.standard_normal(n)
        Pc = solve_lyapunov_dense(A, E, B, "controllability").gramian
        res = A @ Pc @ E.T + E @ Pc @ A.T + np.outer(B, B)
        Mk = np.kron(E, A) + np.kron(A, E)
        pk = np.linalg.solve(Mk, -np.outer(B, B).reshape(-1, order="F"))
        Pk = pk.reshape((n, n), order="F")
        assert np.linalg.norm(res) < 1e-8 * np.linalg.norm(np.outer(B, B))
        assert np.allclose(Pc, Pk, atol=1e-8 * np.abs(Pk).max())

    def test_fom_block_residual(self):
        A = np.array([[-1.0, 100.0], [-100.0, -1.0]])
        B = np.array([10.0, 10.0])
        Pc = solve_lyapunov_dense(A, np.eye(2), B, "controllability").gramian
        res = A @ Pc + Pc @ A.T + np.outer(B, B)
        assert np.linalg.norm(res) < 1e-8 * np.linalg.norm(np.outer(B, B))

    def test_unstable_rejected(self):
        with pytest.raises(UnstablePencil):
            solve_lyapunov_dense(
                np.array([[1.0]]), np.array([[1.0]]), [1.0], "controllability"
            )

    def test_observability_side_solves_its_equation(self):
        sys = random_stable_system(10, seed=3)
        A, E, C = sys.A.toarray(), sys.E.toarray(), sys.C
        Po = solve_lyapunov_dense(A, E, C, "observability").gramian
        res = A.T @ Po @ E + E.T @ Po @ A + np.outer(C, C)
        assert np.linalg.norm(res) < 1e-8 * np.linalg.norm(np.outer(C, C))
