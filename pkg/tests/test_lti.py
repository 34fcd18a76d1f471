import numpy as np
import pytest
import scipy.sparse as sp
from conftest import random_stable_system

from tdmor.exceptions import DimensionMismatch
from tdmor.lti import (
    DescriptorSystem,
    SecondOrderSystem,
    lift_second_order,
    moments,
    project,
    transfer_eval,
)


def scalar_system(a=-1.0, e=1.0, b=1.0, c=1.0):
    return DescriptorSystem(
        E=sp.csc_matrix([[e]]), A=sp.csc_matrix([[a]]), B=[b], C=[c]
    )


class TestTransferEval:
    def test_scalar_at_zero(self):
        # 1/(s+1) at s = 0
        assert transfer_eval(scalar_system(), 0.0) == pytest.approx(1.0)

    def test_scalar_at_one(self):
        assert transfer_eval(scalar_system(), 1.0) == pytest.approx(0.5)

    def test_fom_matches_dense_inverse(self, fom):
        got = transfer_eval(fom, 0.0)
        want = fom.C @ np.linalg.solve(-fom.A.toarray(), fom.B)
        assert got == pytest.approx(want, rel=1e-10)


class TestMoments:
    def test_taylor_at_zero(self):
        m = moments(scalar_system(), 0.0, 2)
        assert np.allclose(m.values, [1.0, -1.0, 1.0])

    def test_taylor_at_one(self):
        m = moments(scalar_system(), 1.0, 1)
        assert np.allclose(m.values, [0.5, -0.25])

    def test_zeroth_moment_is_transfer_value(self):
        sys = random_stable_system(12, seed=3)
        m = moments(sys, 0.7, 0)
        assert m.values[0] == pytest.approx(transfer_eval(sys, 0.7))


class TestProject:
    def test_identity_projection(self):
        sys = random_stable_system(8, seed=1)
        rom = project(sys, np.eye(8), np.eye(8))
        assert np.allclose(rom.Er, sys.E.toarray())
        assert np.allclose(rom.Ar, sys.A.toarray())
        assert np.allclose(rom.Br, sys.B)
        assert np.allclose(rom.Cr, sys.C)

    def test_coordinate_selection(self):
        E = sp.diags([2.0, 3.0]).tocsc()
        A = sp.diags([-1.0, -4.0]).tocsc()
        sys = DescriptorSystem(E=E, A=A, B=[5.0, 6.0], C=[7.0, 8.0])
        e1 = np.array([[1.0], [0.0]])
        rom = project(sys, e1, e1)
        assert rom.Er[0, 0] == 2.0 and rom.Ar[0, 0] == -1.0
        assert rom.Br[0] == 5.0 and rom.Cr[0] == 7.0

    def test_symmetry_preserved_under_congruence(self):
        rng = np.random.default_rng(4)
        Es = rng.standard_normal((30, 30))
        Es = Es + Es.T + 40 * np.eye(30)
        sys = DescriptorSystem(
            E=sp.csc_matrix(Es),
            A=sp.csc_matrix(-np.eye(30)),
            B=rng.standard_normal(30),
            C=rng.standard_normal(30),
        )
        V = np.linalg.qr(rng.standard_normal((30, 5)))[0]
        rom = project(sys, V, V)
        assert np.allclose(rom.Er, rom.Er.T)

    def test_linear_in_b(self):
        sys = random_stable_system(10, seed=7)
        rng = np.random.default_rng(8)
        V = np.linalg.qr(rng.standard_normal((10, 3)))[0]
        B1, B2 = rng.standard_normal(10), rng.standard_normal(10)
        rom1 = project(DescriptorSystem(E=sys.E, A=sys.A, B=B1, C=sys.C), V, V)
        rom2 = project(DescriptorSystem(E=sys.E, A=sys.A, B=B2, C=sys.C), V, V)
        rom12 = project(DescriptorSystem(E=sys.E, A=sys.A, B=B1 + B2, C=sys.C), V, V)
        assert np.allclose(rom12.Br, rom1.Br + rom2.Br)

    def test_dimension_mismatch(self):
        sys = random_stable_system(6, seed=9)
        with pytest.raises(DimensionMismatch):
            project(sys, np.ones((5, 2)), np.ones((5, 2)))


def scalar_sos():
    one = sp.csc_matrix([[1.0]])
    return SecondOrderSystem(M=one, D=one.copy(), K=one.copy(), Bin=[1.0], Cout=[1.0])


class TestLiftSecondOrder:
    def test_chain_form_scalar(self):
        sys = lift_second_order(scalar_sos(), form="chain")
        assert np.allclose(sys.E.toarray(), np.diag([1.0, 1.0]))
        assert np.allclose(sys.A.toarray(), [[0.0, 1.0], [-1.0, -1.0]])
        assert np.allclose(sys.B, [0.0, 1.0])
        assert np.allclose(sys.C, [1.0, 0.0])

    def test_gyro_form_scalar(self):
        sys = lift_second_order(scalar_sos(), form="gyro")
        assert np.allclose(sys.E.toarray(), np.diag([-1.0, 1.0]))
        assert np.allclose(sys.A.toarray(), [[0.0, -1.0], [-1.0, -1.0]])

    @pytest.mark.parametrize("form", ["chain", "gyro"])
    def test_transfer_function_preserved(self, form):
        rng = np.random.default_rng(11)
        m = 6
        Md = np.diag(rng.uniform(1, 2, m))
        Kd = rng.standard_normal((m, m))
        Kd = Kd @ Kd.T + m * np.eye(m)
        Dd = 0.05 * Md + 0.05 * Kd
        sos = SecondOrderSystem(
            M=sp.csc_matrix(Md),
            D=sp.csc_matrix(Dd),
            K=sp.csc_matrix(Kd),
            Bin=rng.standard_normal(m),
            Cout=rng.standard_normal(m),
        )
        lifted = lift_second_order(sos, form=form)
        for s in rng.uniform(0.5, 3.0, 5) + 1j * rng.uniform(-2, 2, 5):
            direct = sos.Cout @ np.linalg.solve(
                s * s * Md + s * Dd + Kd, sos.Bin.astype(complex)
            )
            assert abs(transfer_eval(lifted, s) - direct) < 1e-10 * max(1, abs(direct))
