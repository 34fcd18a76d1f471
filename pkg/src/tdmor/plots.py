"""Figure rendering for sweep results, expansion points and trajectories.

Every figure is written as a self-contained vector-graphics file (SVG or
PDF, chosen by the output extension) next to the delimited data it was
rendered from.
"""

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .exceptions import ParseError

__all__ = ["FIGURES", "emit_plot"]

FIGURES = ("rel_err", "timing", "expansion_points", "trajectories")


def _read_csv(path):
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            fields = reader.fieldnames
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc
    if not rows or fields is None:
        raise ParseError(f"{path!r} holds no data rows")
    return fields, rows


def _require(fields, needed, path):
    missing = [c for c in needed if c not in fields]
    if missing:
        raise ParseError(f"{path!r} lacks required columns {missing}")


def _series_by_label(rows):
    series = {}
    for row in rows:
        label = row["method"]
        if row.get("family_or_shifts") and row["family_or_shifts"] not in ("auto", ""):
            label += "/" + row["family_or_shifts"]
        series.setdefault(label, []).append(row)
    return series


def _save(fig, out_path):
    ext = os.path.splitext(out_path)[1].lower()
    if ext not in (".svg", ".pdf"):
        out_path = out_path + ".svg"
    fig.savefig(out_path, bbox_inches="tight")
    plt.close(fig)
    return out_path


def _plot_rel_err(csv_path, out_path):
    fields, rows = _read_csv(csv_path)
    _require(fields, ("method", "r", "rel_err_2"), csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, items in sorted(_series_by_label(rows).items()):
        pts = [
            (int(it["r"]), float(it["rel_err_2"]))
            for it in items
            if it["rel_err_2"] not in ("", "nan")
            and not math.isnan(float(it["rel_err_2"]))
        ]
        if not pts:
            continue
        pts.sort()
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, label=label)
    ax.set_xlabel("reduced order r")
    ax.set_ylabel("2-norm averaged relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, out_path)


def _plot_timing(csv_path, out_path):
    fields, rows = _read_csv(csv_path)
    _require(fields, ("method", "r", "reduce_seconds", "sim_seconds"), csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, items in sorted(_series_by_label(rows).items()):
        pts = [
            (int(it["r"]), float(it["reduce_seconds"]) + float(it["sim_seconds"]))
            for it in items
            if it["reduce_seconds"] not in ("", "nan")
        ]
        pts = [(r, t) for r, t in pts if t > 0]
        if not pts:
            continue
        pts.sort()
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, label=label)
    meta_path = csv_path + ".meta.json"
    if os.path.exists(meta_path):
        with open(meta_path) as fh:
            meta = json.load(fh)
        if meta.get("reference_sim_seconds"):
            ax.axhline(
                meta["reference_sim_seconds"], color="k", ls="--", lw=1,
                label="full-order simulation",
            )
    ax.set_xlabel("reduced order r")
    ax.set_ylabel("reduce + simulate seconds")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, out_path)


def _plot_expansion_points(csv_path, out_path):
    fields, rows = _read_csv(csv_path)
    _require(fields, ("family", "variant", "re", "im"), csv_path)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5), sharey=True)
    for ax, variant in zip(axes, ("tdmor1", "tdmor2")):
        for family in sorted({row["family"] for row in rows}):
            xs, ys = [], []
            for row in rows:
                if row["family"] != family or row["variant"] != variant:
                    continue
                if row.get("infinite") == "1" or row["re"] in ("", "nan"):
                    continue
                xs.append(float(row["re"]))
                ys.append(float(row["im"]))
            if xs:
                ax.scatter(xs, ys, s=12, label=family)
        ax.set_title(variant)
        ax.set_xlabel("Re")
        ax.grid(True, alpha=0.3)
        ax.axhline(0, color="k", lw=0.5)
        ax.axvline(0, color="k", lw=0.5)
    axes[0].set_ylabel("Im")
    axes[0].legend(fontsize=8)
    return _save(fig, out_path)


def _plot_trajectories(csv_path, out_path):
    fields, rows = _read_csv(csv_path)
    _require(fields, ("t", "y"), csv_path)
    t = [float(r["t"]) for r in rows]
    y = [float(r["y"]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(t, y, lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("y(t)")
    ax.grid(True, alpha=0.3)
    return _save(fig, out_path)


def emit_plot(csv_path, figure, out_path):
    """Render one figure kind from a CSV file; returns the written path."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {FIGURES}")
    render = {
        "rel_err": _plot_rel_err,
        "timing": _plot_timing,
        "expansion_points": _plot_expansion_points,
        "trajectories": _plot_trajectories,
    }[figure]
    return render(csv_path, out_path)
