"""Delimited report output and the figures rendered alongside it.

CSV is the primary tabular format; JSON mirrors it losslessly.  Floats are
printed with 17 significant digits so every value round-trips exactly.
When a report is written to a file, a matplotlib rendering of the same data
is saved next to it (PNG, same stem) unless plotting is disabled.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import spectra
from .segment import (SampledFunction, SplineSpaceSpec, q_space_basis,
                      segment_length, uniform_knots)


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def rows_to_csv_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    fieldnames = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format_value(v) for k, v in row.items()})
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def rows_to_json_text(rows: list[dict], meta: dict | None = None) -> str:
    payload = {"meta": _json_safe(meta or {}), "rows": [_json_safe(r) for r in rows]}
    return json.dumps(payload, indent=2, allow_nan=False, sort_keys=True) + "\n"


def write_report(rows: list[dict], out: str | None, fmt: str,
                 meta: dict | None = None) -> None:
    text = rows_to_csv_text(rows) if fmt == "csv" else rows_to_json_text(rows, meta)
    if out is None or out == "-":
        print(text, end="")
    else:
        Path(out).write_text(text)


def figure_path(out: str, suffix: str = "") -> str:
    p = Path(out)
    name = p.stem + (f"_{suffix}" if suffix else "") + ".png"
    return str(p.with_name(name))


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def render_widths_figure(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["class"], row["r"]), []).append(row)
    for (cls, r), grp in sorted(groups.items()):
        grp = sorted(grp, key=lambda g: g["n"])
        ns = [g["n"] for g in grp]
        ax.plot(ns, [g["semiaxis_width"] for g in grp], "-", alpha=0.6,
                label=f"{cls}, r={r}")
        ax.plot(ns, [g["ratio_width"] for g in grp], "k.", markersize=4)
    ax.set_yscale("log")
    ax.set_xlabel("subspace dimension n")
    ax.set_ylabel("width")
    ax.set_title("class widths: semiaxis values (lines) vs ratio oracle (dots)")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    _save(fig, path)


def render_condition_figure(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = np.arange(len(rows))
    margins = np.array([row["margin"] for row in rows], dtype=float)
    slacks = np.array([row["slack"] for row in rows], dtype=float)
    colors = {"pass": "tab:green", "fail": "tab:red", "inconclusive": "tab:orange"}
    finite = np.where(np.isfinite(margins), margins, np.sign(margins) * 1e300)
    ax.bar(xs, np.sign(finite) * np.log10(1.0 + np.abs(finite)),
           color=[colors[row["verdict"]] for row in rows])
    ax.plot(xs, np.log10(1.0 + np.where(np.isfinite(slacks), slacks, 0.0)),
            "k_", markersize=6, label="truncation slack")
    ax.set_xticks(xs)
    ax.set_xticklabels([f"{row['condition']}[{row['l']}]" for row in rows],
                       rotation=90, fontsize=6)
    ax.set_ylabel("signed log10(1 + |margin|)")
    ax.axhline(0.0, color="k", linewidth=0.6)
    ax.legend(fontsize=7)
    fig.tight_layout()
    _save(fig, path)


def render_project_figure(sample: SampledFunction, family: int,
                          approx, error: float, bound_rhs: float, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    fine = np.linspace(0.0, segment_length(family), 512)
    vals = spectra.evaluate_grid(approx, fine)
    ax.plot(sample.grid, sample.values.real, "o", markersize=3, label="sample")
    ax.plot(fine, vals.real, "-", label="best approximation")
    if np.max(np.abs(sample.values.imag)) > 1e-12:
        ax.plot(sample.grid, sample.values.imag, "s", markersize=3,
                label="sample (imag)")
        ax.plot(fine, vals.imag, "--", label="approximation (imag)")
    ax.set_xlabel("x")
    ax.set_title(f"segment error {error:.3e} vs certified bound {bound_rhs:.3e}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def render_splines_figure(spec: SplineSpaceSpec, cutoff: int, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    fine = np.linspace(0.0, segment_length(spec.family), 512)
    for i, el in enumerate(q_space_basis(spec, cutoff)):
        vals = spectra.evaluate_grid(el, fine)
        ax.plot(fine, vals.real, label=f"basis {i + 1} (re)", linewidth=1.0)
        if np.max(np.abs(vals.imag)) > 1e-9 * max(1.0, np.max(np.abs(vals.real))):
            ax.plot(fine, vals.imag, "--", linewidth=0.8)
    for t in uniform_knots(spec.family, spec.parity, spec.n).knots:
        ax.axvline(t, color="0.8", linewidth=0.7, zorder=0)
    ax.set_xlabel("x")
    ax.set_title(f"family {spec.family}, degree {spec.d}, n={spec.n}, "
                 f"{spec.parity.value} knots")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    _save(fig, path)
