"""Reduction/simulation sweeps over a (method, family, order) grid.

A sweep reduces the chosen benchmark model with every configured method
at every order, simulates original and reduced models with the same
implicit-Euler settings, and writes one CSV row per combination.  Failed
reductions are recorded in the ``notes`` column instead of aborting.
Given the same configuration and seed the CSV is byte-identical except
for the two timing columns.
"""

import configparser
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bench, reducers
from .exceptions import ConfigError, TdmorError
from .lti import lift_second_order, pencil_eigenvalues
from .reducers import ShiftSet
from .timesim import InputSignal, implicit_euler, relative_error_2norm

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "CSV_COLUMNS",
    "parse_orders",
    "parse_shifts",
    "load_config",
    "build_model",
    "run_sweep",
    "write_rows_csv",
]

METHODS = ("syltdmor1", "syltdmor2", "omm", "tmm", "oirka", "irka", "bt")
MODELS = ("fom", "triple_chain", "mini_gyro", "matrix_market")

CSV_COLUMNS = (
    "model",
    "method",
    "family_or_shifts",
    "r",
    "rel_err_2",
    "reduce_seconds",
    "sim_seconds",
    "converged",
    "notes",
)

#: timing columns excluded from the byte-identical determinism guarantee
TIMING_COLUMNS = ("reduce_seconds", "sim_seconds")


def parse_orders(spec):
    """Parse ``start:step:stop`` (inclusive) or a single integer."""
    spec = str(spec).strip()
    try:
        if ":" not in spec:
            return [int(spec)]
        parts = [int(p) for p in spec.split(":")]
    except ValueError as exc:
        raise ConfigError(f"bad orders spec {spec!r}") from exc
    if len(parts) != 3:
        raise ConfigError(f"orders spec must be start:step:stop, got {spec!r}")
    start, step, stop = parts
    if step <= 0 or stop < start:
        raise ConfigError(f"bad orders range {spec!r}")
    return list(range(start, stop + 1, step))


def parse_shifts(spec):
    """Parse a shift list like ``1, 2+3j*2`` (value, optional ``*mult``)."""
    points, mults = [], []
    for item in str(spec).split(","):
        item = item.strip()
        if not item:
            continue
        if "*" in item:
            value, mult = item.split("*", 1)
        else:
            value, mult = item, "1"
        try:
            s = complex(value.strip())
            m = int(mult)
        except ValueError as exc:
            raise ConfigError(f"bad shift {item!r}") from exc
        points.append(s)
        mults.append(m)
        if abs(s.imag) > 0:
            points.append(s.conjugate())
            mults.append(m)
    if not points:
        raise ConfigError("empty shift list")
    return ShiftSet(points=np.array(points), multiplicities=np.array(mults))


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "fom"
    methods: tuple = ("bt",)
    families: tuple = ("legendre",)
    orders: tuple = (10,)
    tf: float = 1.0
    tau: float = 1e-3
    input_kind: str = "paper_step"
    shifts: str = "1"
    seed: int = 0
    cycles: int = 1
    jobs: int = 1
    t0_poly: float = 0.0
    out: str = "sweep.csv"
    matrix_market_files: tuple = ()

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        if not self.methods:
            raise ConfigError("need at least one method")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {METHODS}")
        if not self.orders:
            raise ConfigError("need at least one order")
        if min(self.orders) < 1:
            raise ConfigError("orders must be >= 1")
        if self.tau <= 0 or self.tf <= 0:
            raise ConfigError("tau and tf must be positive")
        if self.cycles < 1 or self.jobs < 1:
            raise ConfigError("cycles and jobs must be >= 1")
        if self.model == "matrix_market" and len(self.matrix_market_files) != 5:
            raise ConfigError("matrix_market model needs five files: M,D,K,B,C")
        return self


def load_config(path=None, overrides=None):
    """Configuration from an INI file (section ``[experiment]``), then flag
    overrides; flags win."""
    values = {}
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file {path!r} not found")
        if "experiment" not in parser:
            raise ConfigError("config file needs an [experiment] section")
        values.update(dict(parser["experiment"]))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    def split(v):
        return tuple(s.strip() for s in str(v).split(",") if s.strip())

    cfg = ExperimentConfig(
        model=str(values.get("model", "fom")),
        methods=split(values.get("methods", "bt")),
        families=split(values.get("families", "legendre")),
        orders=tuple(parse_orders(values.get("orders", "10"))),
        tf=float(values.get("tf", 1.0)),
        tau=float(values.get("tau", 1e-3)),
        input_kind=str(values.get("input", "paper_step")),
        shifts=str(values.get("shifts", "1")),
        seed=int(values.get("seed", 0)),
        cycles=int(values.get("cycles", 1)),
        jobs=int(values.get("jobs", 1)),
        t0_poly=float(values.get("t0_poly", 0.0)),
        out=str(values.get("out", "sweep.csv")),
        matrix_market_files=split(values.get("matrix_market_files", "")),
    )
    return cfg.validate()


@dataclass
class ResultRow:
    model: str
    method: str
    family_or_shifts: str
    r: int
    rel_err_2: float = math.nan
    reduce_seconds: float = 0.0
    sim_seconds: float = 0.0
    converged: str = ""
    notes: str = ""

    def as_csv(self):
        return [
            self.model,
            self.method,
            self.family_or_shifts,
            str(self.r),
            _fmt(self.rel_err_2),
            _fmt(self.reduce_seconds),
            _fmt(self.sim_seconds),
            self.converged,
            self.notes.replace(",", ";"),
        ]


def _fmt(x):
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def build_model(cfg):
    """Instantiate the configured benchmark model as a descriptor system."""
    if cfg.model == "fom":
        return bench.build_fom()
    if cfg.model == "triple_chain":
        return lift_second_order(bench.build_triple_chain(), form="chain")
    if cfg.model == "mini_gyro":
        return lift_second_order(bench.build_mini_gyro(), form="gyro")
    sos = bench.load_matrix_market(*cfg.matrix_market_files)
    return lift_second_order(sos, form="gyro")


def _reduce_one(sys, cfg, method, family, r):
    if method == "syltdmor1":
        return reducers.syltdmor1(sys, family, r, t0=cfg.t0_poly)
    if method == "syltdmor2":
        return reducers.syltdmor2(sys, family, r)
    if method in ("omm", "tmm"):
        base = parse_shifts(cfg.shifts)
        reps = [(s, m) for s, m in zip(base.points, base.multiplicities)]
        total = base.total_order
        if total == r:
            shifts = base
        elif len(reps) == 1 and reps[0][0].imag == 0:
            shifts = ShiftSet(points=base.points, multiplicities=np.array([r]))
        else:
            raise ConfigError(
                f"shift multiplicities sum to {total}, expected {r}; "
                "give explicit multiplicities per order or a single real shift"
            )
        return reducers.moment_matching(sys, shifts, sided="one" if method == "omm" else "two")
    if method == "oirka":
        return reducers.irka(sys, r, sided="one", seed=cfg.seed)
    if method == "irka":
        return reducers.irka(sys, r, sided="two", seed=cfg.seed)
    return reducers.balanced_truncation(sys, r)


def _row_task(sys, cfg, sig, ref, method, family, r):
    if method in ("syltdmor1", "syltdmor2"):
        label = family
    elif method in ("omm", "tmm"):
        label = cfg.shifts.replace(",", ";").replace(" ", "")
    else:
        label = "auto"
    row = ResultRow(model=cfg.model, method=method, family_or_shifts=label, r=r)
    try:
        t0 = time.perf_counter()
        report = None
        for _ in range(cfg.cycles):
            report = _reduce_one(sys, cfg, method, family, r)
        row.reduce_seconds = (time.perf_counter() - t0) / cfg.cycles
    except (TdmorError, ValueError) as exc:
        row.notes = f"reduction failed: {type(exc).__name__}: {exc}"
        return row
    model = report.model
    if "converged" in report.diagnostics:
        row.converged = "true" if report.diagnostics["converged"] else "false"
    extra_notes = []
    if model.r != r:
        extra_notes.append(f"order reduced to {model.r}")
    t0 = time.perf_counter()
    try:
        traj = implicit_euler(model, sig, t0=0.0, tf=cfg.tf, tau=cfg.tau)
    except TdmorError as exc:
        row.notes = "; ".join(extra_notes + [f"simulation failed: {type(exc).__name__}"])
        return row
    row.sim_seconds = time.perf_counter() - t0
    lam = pencil_eigenvalues(model)
    lam = lam[np.isfinite(lam)]
    if lam.size and lam.real.max() >= 0:
        extra_notes.append("unstable ROM")
    if not np.all(np.isfinite(traj.outputs)):
        row.rel_err_2 = math.nan
        extra_notes.append("non-finite output")
    else:
        row.rel_err_2 = relative_error_2norm(ref, traj)
    row.notes = "; ".join(extra_notes)
    return row


def run_sweep(cfg):
    """Execute the sweep; returns (rows, meta) in deterministic config order."""
    cfg.validate()
    sys = build_model(cfg)
    sig = InputSignal(kind=cfg.input_kind)
    t0 = time.perf_counter()
    ref = implicit_euler(sys, sig, t0=0.0, tf=cfg.tf, tau=cfg.tau)
    ref_seconds = time.perf_counter() - t0

    tasks = []
    for method in cfg.methods:
        fams = cfg.families if method in ("syltdmor1", "syltdmor2") else (None,)
        for family in fams:
            for r in cfg.orders:
                tasks.append((method, family, r))

    rows = [None] * len(tasks)
    if cfg.jobs == 1:
        for i, (method, family, r) in enumerate(tasks):
            rows[i] = _row_task(sys, cfg, sig, ref, method, family, r)
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = {
                pool.submit(_row_task, sys, cfg, sig, ref, method, family, r): i
                for i, (method, family, r) in enumerate(tasks)
            }
            for fut, i in futures.items():
                rows[i] = fut.result()
    meta = {
        "model": cfg.model,
        "order": sys.n,
        "reference_sim_seconds": ref_seconds,
        "tau": cfg.tau,
        "tf": cfg.tf,
        "seed": cfg.seed,
        "cycles": cfg.cycles,
    }
    return rows, meta


def write_rows_csv(rows, path, meta=None):
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row.as_csv()) + "\n")
    if meta is not None:
        with open(str(path) + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
