"""Implicit-Euler simulation, the benchmark input signal and the error norm.

The benchmark input is zero, then a half-sine ramp, then one:

    u(t) = 0 on [0, ta), 1 on [tb, tf], and
    u(t) = sin(pi*((t - ta)/(tb - ta) - 1/2))/2 + 1/2 on [ta, tb)

with default window [0.1, 0.2]; the ramp starts and ends with zero slope.
The reported error is the 2-norm averaged relative error over time,

    ( sum_{i>=1} ((y(i tau) - y_r(i tau)) / y(i tau))^2 )^{1/2}

summed exactly as displayed, with no time-step weight.  Samples where
|y| < 1e-300 are excluded (and counted) so the startup window, where both
outputs are exactly zero, cannot divide by zero.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .exceptions import GridMismatch, StepMatrixSingular
from .lti import ReducedModel

__all__ = [
    "InputSignal",
    "Trajectory",
    "TimeRescaling",
    "eval_input",
    "implicit_euler",
    "relative_error_2norm",
    "rescale_time",
    "write_trajectory_csv",
    "read_trajectory_csv",
]

#: samples with |y| below this are skipped by the relative error
_REL_ERR_FLOOR = 1e-300


@dataclass(frozen=True)
class InputSignal:
    """Input u(t): the benchmark ramped step, a constant, or a lookup table."""

    kind: str = "paper_step"
    value: float = 1.0
    ramp_start: float = 0.1
    ramp_end: float = 0.2
    table_t: np.ndarray | None = None
    table_u: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("paper_step", "constant", "table"):
            raise ValueError(f"unknown input kind {self.kind!r}")
        if self.kind == "paper_step" and not self.ramp_end > self.ramp_start:
            raise ValueError("ramp window must have positive width")
        if self.kind == "table":
            t = np.asarray(self.table_t, dtype=float)
            u = np.asarray(self.table_u, dtype=float)
            if t.ndim != 1 or t.shape != u.shape or t.size < 2:
                raise ValueError("table needs matching 1-D t and u arrays")
            object.__setattr__(self, "table_t", t)
            object.__setattr__(self, "table_u", u)

    def __call__(self, t):
        return eval_input(self, t)


def eval_input(sig, t):
    """Evaluate the input signal; accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    if sig.kind == "constant":
        out = np.full_like(t, sig.value, dtype=float)
    elif sig.kind == "table":
        out = np.interp(t, sig.table_t, sig.table_u)
    else:
        ta, tb = sig.ramp_start, sig.ramp_end
        phase = (t - ta) / (tb - ta) - 0.5
        ramp = 0.5 * np.sin(np.pi * phase) + 0.5
        out = np.where(t < ta, 0.0, np.where(t < tb, ramp, 1.0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Trajectory:
    """Output samples on the uniform grid t0 + i*tau."""

    times: np.ndarray
    outputs: np.ndarray
    states: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        y = np.asarray(self.outputs, dtype=float)
        if t.ndim != 1 or t.shape != y.shape:
            raise ValueError("times and outputs must be matching 1-D arrays")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "outputs", y)


def implicit_euler(sys, sig, t0=0.0, tf=1.0, tau=1e-3, x0=None, keep_states=False):
    """Implicit-Euler trajectory: (E - tau A) x_{i+1} = E x_i + tau B u(t_{i+1}).

    One factorization of the step matrix is reused for every step.

    Raises
    ------
    StepMatrixSingular
        If (E - tau A) cannot be factorized.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    dense = isinstance(sys, ReducedModel)
    E = sys.Er if dense else sys.E
    A = sys.Ar if dense else sys.A
    B = sys.Br if dense else sys.B
    C = sys.Cr if dense else sys.C
    n = B.shape[0]
    nsteps = int(np.floor((tf - t0) / tau + 1e-9))
    times = t0 + tau * np.arange(nsteps + 1)
    u = eval_input(sig, times)
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).reshape(n)
    try:
        if dense:
            lu = sla.lu_factor(E - tau * A)
            step = lambda rhs: sla.lu_solve(lu, rhs)  # noqa: E731
        else:
            lu = spla.splu((E - tau * A).tocsc())
            step = lu.solve
    except (RuntimeError, sla.LinAlgError) as exc:
        raise StepMatrixSingular("E - tau*A is singular") from exc
    y = np.empty(nsteps + 1)
    y[0] = C @ x
    states = [x.copy()] if keep_states else None
    for i in range(1, nsteps + 1):
        x = step(E @ x + tau * B * u[i])
        y[i] = C @ x
        if keep_states:
            states.append(x.copy())
    return Trajectory(
        times=times, outputs=y, states=np.array(states) if keep_states else None
    )


def relative_error_2norm(y, yr, return_skipped=False):
    """2-norm averaged relative error of yr against the reference y.

    Sums ((y_i - yr_i)/y_i)^2 over i = 1..N (the initial sample is not
    part of the displayed sum); samples with |y_i| < 1e-300 are skipped.

    Raises
    ------
    GridMismatch
        If the two trajectories are not on the same grid.
    """
    if y.times.shape != yr.times.shape or not np.allclose(
        y.times, yr.times, rtol=0, atol=1e-12 * max(1.0, abs(y.times[-1]))
    ):
        raise GridMismatch("trajectories are on different time grids")
    ref = y.outputs[1:]
    test = yr.outputs[1:]
    mask = np.abs(ref) >= _REL_ERR_FLOOR
    skipped = int(np.count_nonzero(~mask))
    d = (ref[mask] - test[mask]) / ref[mask]
    err = float(np.sqrt(np.sum(d * d)))
    if return_skipped:
        return err, skipped
    return err


@dataclass(frozen=True)
class TimeRescaling:
    """Affine map of a physical time interval onto [0, 1]."""

    t0: float
    tf: float
    tau_physical: float

    @property
    def tau_unit(self):
        return self.tau_physical / (self.tf - self.t0)

    def to_unit(self, t):
        return (np.asarray(t, dtype=float) - self.t0) / (self.tf - self.t0)

    def from_unit(self, s):
        return self.t0 + np.asarray(s, dtype=float) * (self.tf - self.t0)


def rescale_time(tf_physical, tau_physical, t0_physical=0.0):
    """Map [t0, tf] with step tau onto the unit interval; reduction always
    operates on the unit interval."""
    if not tf_physical > t0_physical:
        raise ValueError("tf must exceed t0")
    return TimeRescaling(t0=t0_physical, tf=tf_physical, tau_physical=tau_physical)


def write_trajectory_csv(traj, path):
    """CSV export: header ``t,y``, 17 significant digits."""
    with open(path, "w") as fh:
        fh.write("t,y\n")
        for t, y in zip(traj.times, traj.outputs):
            fh.write(f"{t:.17g},{y:.17g}\n")


def read_trajectory_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return Trajectory(times=np.atleast_1d(data["t"]), outputs=np.atleast_1d(data["y"]))
