"""Command-line front end.

Subcommands: ``reduce``, ``simulate``, ``sweep``, ``verify``, ``plot``.
Exit status is 0 on success, 1 on any hard failure, 2 on configuration
errors.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .exceptions import ConfigError, TdmorError
from .lti import Provenance, ReducedModel
from .plots import FIGURES, emit_plot
from .sweep import (
    build_model,
    load_config,
    parse_orders,
    run_sweep,
    write_rows_csv,
    _reduce_one,
    METHODS,
    MODELS,
)
from .timesim import InputSignal, implicit_euler, write_trajectory_csv
from .verify import SUITES, run_verify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _common_model_args(p):
    p.add_argument("--model", default="fom", help=f"benchmark model, one of {MODELS}")
    p.add_argument(
        "--matrix-market-files",
        default=None,
        help="comma list of M,D,K,B,C files for --model matrix_market",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tdmor",
        description="Model-order reduction toolkit for SISO descriptor systems",
    )
    parser.add_argument("--version", action="version", version=f"tdmor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a benchmark model once")
    _common_model_args(p)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--family", default="legendre")
    p.add_argument("--orders", required=True, help="single order, e.g. 20")
    p.add_argument("--shifts", default="1", help="shift list for omm/tmm, e.g. '1*4' or '1+2j,3'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t0-poly", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output .npz for the reduced model")

    p = sub.add_parser("simulate", help="implicit-Euler simulation to CSV")
    _common_model_args(p)
    p.add_argument("--rom", default=None, help="simulate a reduced model from .npz instead")
    p.add_argument("--tau", type=float, default=1e-3)
    p.add_argument("--tf", type=float, default=1.0)
    p.add_argument("--input", default="paper_step", choices=("paper_step", "constant"))
    p.add_argument("--out", required=True, help="output trajectory CSV (t,y)")

    p = sub.add_parser("sweep", help="run a reduction/simulation sweep to CSV")
    p.add_argument("--config", default=None, help="INI file with an [experiment] section")
    p.add_argument("--model", default=None, help=f"benchmark model, one of {MODELS}")
    p.add_argument(
        "--matrix-market-files",
        default=None,
        help="comma list of M,D,K,B,C files for --model matrix_market",
    )
    p.add_argument("--methods", default=None, help="comma list from " + ",".join(METHODS))
    p.add_argument("--families", default=None, help="comma list of polynomial families")
    p.add_argument("--orders", default=None, help="start:step:stop (inclusive)")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--tf", type=float, default=None)
    p.add_argument("--shifts", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cycles", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="run a property-check suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--rmax", type=int, default=None, help="order range override")
    p.add_argument("--out", default=None, help="write the report to this file")

    p = sub.add_parser("plot", help="render a figure from a CSV file")
    p.add_argument("--csv", required=True)
    p.add_argument("--figure", required=True, choices=FIGURES)
    p.add_argument("--out", required=True, help="output .svg or .pdf")
    return parser


def _cmd_reduce(args):
    overrides = {
        "model": args.model,
        "matrix_market_files": args.matrix_market_files,
        "shifts": args.shifts,
        "seed": args.seed,
        "t0_poly": args.t0_poly,
        "methods": args.method,
        "families": args.family,
        "orders": args.orders,
    }
    cfg = load_config(None, overrides)
    orders = parse_orders(args.orders)
    if len(orders) != 1:
        raise ConfigError("reduce takes a single order")
    sys_model = build_model(cfg)
    report = _reduce_one(sys_model, cfg, args.method, args.family, orders[0])
    m = report.model
    np.savez(
        args.out,
        Er=m.Er,
        Ar=m.Ar,
        Br=m.Br,
        Cr=m.Cr,
        method=np.str_(m.provenance.method),
        family=np.str_(m.provenance.family or ""),
    )
    print(
        f"reduced {cfg.model} (n={sys_model.n}) to order {m.r} "
        f"with {args.method}; wrote {args.out}"
    )
    for key, val in sorted(report.diagnostics.items()):
        if isinstance(val, (int, float, str, bool)):
            print(f"  {key}: {val}")
    return EXIT_OK


def _load_rom(path):
    data = np.load(path, allow_pickle=False)
    prov = Provenance(method=str(data["method"]), family=str(data["family"]) or None)
    return ReducedModel(
        Er=data["Er"], Ar=data["Ar"], Br=data["Br"], Cr=data["Cr"], provenance=prov
    )


def _cmd_simulate(args):
    if args.rom is not None:
        model = _load_rom(args.rom)
        label = f"reduced model from {args.rom} (r={model.r})"
    else:
        cfg = load_config(
            None, {"model": args.model, "matrix_market_files": args.matrix_market_files}
        )
        model = build_model(cfg)
        label = f"{args.model} (n={model.n})"
    sig = InputSignal(kind=args.input)
    traj = implicit_euler(model, sig, t0=0.0, tf=args.tf, tau=args.tau)
    write_trajectory_csv(traj, args.out)
    print(f"simulated {label} over [0, {args.tf}] with tau={args.tau}; wrote {args.out}")
    return EXIT_OK


def _cmd_sweep(args):
    overrides = {
        "model": args.model,
        "methods": args.methods,
        "families": args.families,
        "orders": args.orders,
        "tau": args.tau,
        "tf": args.tf,
        "shifts": args.shifts,
        "seed": args.seed,
        "cycles": args.cycles,
        "jobs": args.jobs,
        "out": args.out,
        "matrix_market_files": args.matrix_market_files,
    }
    cfg = load_config(args.config, overrides)
    rows, meta = run_sweep(cfg)
    write_rows_csv(rows, cfg.out, meta)
    failed = sum(1 for row in rows if "failed" in row.notes)
    print(f"wrote {len(rows)} rows to {cfg.out} ({failed} failed reductions noted)")
    return EXIT_OK


def _cmd_verify(args):
    kwargs = {}
    if args.rmax is not None and args.suite != "oracle":
        kwargs["rmax"] = args.rmax
    report = run_verify(args.suite, **kwargs)
    lines = [f"suite: {report.suite}", f"passed: {report.passed}"] + report.lines
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if report.points_rows:
            stem = args.out.rsplit(".", 1)[0]
            points_path = f"{stem}_points.csv"
            with open(points_path, "w") as fh:
                fh.write("family,variant,r,re,im,infinite\n")
                for fam, variant, r, re, im, isinf in report.points_rows:
                    fh.write(f"{fam},{variant},{r},{re:.17g},{im:.17g},{isinf}\n")
            print(f"wrote expansion points to {points_path}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_plot(args):
    written = emit_plot(args.csv, args.figure, args.out)
    print(f"wrote {written}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "reduce": _cmd_reduce,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "plot": _cmd_plot,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TdmorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
