import numpy as np
import pytest
import scipy.sparse as sp

from tdmor.exceptions import GridMismatch
from tdmor.lti import DescriptorSystem
from tdmor.timesim import (
    InputSignal,
    Trajectory,
    eval_input,
    implicit_euler,
    read_trajectory_csv,
    relative_error_2norm,
    rescale_time,
    write_trajectory_csv,
)


def scalar_decay(b=0.0):
    return DescriptorSystem(
        E=sp.csc_matrix([[1.0]]), A=sp.csc_matrix([[-1.0]]), B=[b], C=[1.0]
    )


class TestEvalInput:
    def test_zero_before_ramp(self):
        assert eval_input(InputSignal(), 0.05) == 0.0

    def test_half_at_ramp_midpoint(self):
        assert eval_input(InputSignal(), 0.15) == pytest.approx(0.5)

    def test_one_after_ramp(self):
        assert eval_input(InputSignal(), 0.5) == 1.0

    def test_continuity_and_flat_ends(self):
        sig = InputSignal()
        assert eval_input(sig, 0.1) == pytest.approx(0.0, abs=1e-15)
        assert eval_input(sig, 0.2 - 1e-12) == pytest.approx(1.0, abs=1e-9)
        h = 1e-7
        slope_a = (eval_input(sig, 0.1 + h) - eval_input(sig, 0.1)) / h
        assert abs(slope_a) < 1e-4

    def test_general_window_rescales(self):
        sig = InputSignal(ramp_start=0.2, ramp_end=0.6)
        assert eval_input(sig, 0.2) == pytest.approx(0.0, abs=1e-15)
        assert eval_input(sig, 0.4) == pytest.approx(0.5)
        assert eval_input(sig, 0.6) == 1.0

    def test_constant_and_table(self):
        assert eval_input(InputSignal(kind="constant", value=3.5), 0.7) == 3.5
        sig = InputSignal(kind="table", table_t=[0.0, 1.0], table_u=[0.0, 2.0])
        assert eval_input(sig, 0.25) == pytest.approx(0.5)


class TestImplicitEuler:
    def test_scalar_one_step(self):
        traj = implicit_euler(
            scalar_decay(), InputSignal(kind="constant", value=0.0),
            tf=0.1, tau=0.1, x0=[1.0],
        )
        assert traj.outputs[1] == pytest.approx(1 / 1.1)

    def test_zero_input_zero_state(self):
        traj = implicit_euler(scalar_decay(b=1.0), InputSignal(kind="constant", value=0.0))
        assert np.all(traj.outputs == 0.0)

    def test_grid_length(self):
        traj = implicit_euler(scalar_decay(), InputSignal(), tf=1.0, tau=1e-3)
        assert len(traj.times) == 1001

    def test_equilibrium_exact(self):
        # A x* + B u = 0 with x0 = x*: the trajectory stays put
        sys = scalar_decay(b=2.0)
        traj = implicit_euler(
            sys, InputSignal(kind="constant", value=1.0), tf=0.5, tau=1e-2, x0=[2.0]
        )
        assert np.abs(traj.outputs - 2.0).max() < 1e-12

    def test_first_order_convergence(self):
        # x' = -x + 1, exact solution 1 - exp(-t)
        sys = scalar_decay(b=1.0)
        sig = InputSignal(kind="constant", value=1.0)
        errs = []
        taus = [1e-2, 5e-3, 2.5e-3]
        for tau in taus:
            traj = implicit_euler(sys, sig, tf=1.0, tau=tau)
            exact = 1.0 - np.exp(-traj.times)
            errs.append(np.abs(traj.outputs - exact).max())
        slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
        assert 0.9 <= slope <= 1.1


class TestRelativeError:
    def test_zero_for_identical(self):
        t = np.linspace(0, 1, 11)
        y = Trajectory(times=t, outputs=np.ones(11))
        assert relative_error_2norm(y, y) == 0.0

    def test_closed_form(self):
        t = np.linspace(0, 1, 1001)
        y = Trajectory(times=t, outputs=np.ones(1001))
        yr = Trajectory(times=t, outputs=np.full(1001, 1.0 + 1e-3))
        err = relative_error_2norm(y, yr)
        assert err == pytest.approx(np.sqrt(1000e-6), abs=1e-12)
        assert err == pytest.approx(0.0316, abs=1e-4)

    def test_startup_zeros_skipped(self):
        t = np.linspace(0, 1, 101)
        ref = np.concatenate([np.zeros(20), np.ones(81)])
        y = Trajectory(times=t, outputs=ref)
        yr = Trajectory(times=t, outputs=ref * 1.001)
        err, skipped = relative_error_2norm(y, yr, return_skipped=True)
        assert skipped == 19  # sample 0 is never part of the sum
        assert np.isfinite(err)

    def test_grid_mismatch(self):
        a = Trajectory(times=np.linspace(0, 1, 11), outputs=np.ones(11))
        b = Trajectory(times=np.linspace(0, 2, 11), outputs=np.ones(11))
        with pytest.raises(GridMismatch):
            relative_error_2norm(a, b)


class TestRescaleTime:
    def test_gyro_window(self):
        m = rescale_time(0.005, 5e-6)
        assert m.tau_unit == pytest.approx(1e-3)
        assert m.to_unit(0.005) == pytest.approx(1.0)

    def test_identity(self):
        m = rescale_time(1.0, 1e-3)
        assert m.tau_unit == pytest.approx(1e-3)
        assert m.to_unit(0.3) == pytest.approx(0.3)

    def test_affine(self):
        m = rescale_time(4.0, 0.02, t0_physical=2.0)
        assert m.tau_unit == pytest.approx(0.01)
        assert m.to_unit(3.0) == pytest.approx(0.5)
        assert m.from_unit(0.5) == pytest.approx(3.0)


class TestTrajectoryCsv:
    def test_round_trip(self, tmp_path):
        t = np.linspace(0, 1, 21)
        y = np.sin(3 * t) * 1e-7
        traj = Trajectory(times=t, outputs=y)
        path = tmp_path / "traj.csv"
        write_trajectory_csv(traj, path)
        text = path.read_text().splitlines()
        assert text[0] == "t,y"
        back = read_trajectory_csv(path)
        assert np.array_equal(back.times, t)
        assert np.array_equal(back.outputs, y)
