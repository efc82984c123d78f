"""Batch front-end: certify generators, sweep width tables, project samples,
and verify spline spaces, writing CSV/JSON reports with figures alongside.

Exit codes: 0 every reported check passed, 2 some check failed,
3 some check was inconclusive at the working truncation, 64 bad usage or
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import conditions, report, segment, spectra, widths
from .kernels import (BSpline, CustomKernel, DiffOperator, Dirichlet,
                      GeneralizedBernoulli, Heat, Kernel, Poisson,
                      ShiftedBSpline, Weighted, catalog)
from .segment import KnotParity, SplineSpaceSpec, matched_parity
from .spaces import ShiftSpaceSpec, SpaceKind
from .spectra import DecayBound, SmoothnessClass, SymmetryClass

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 2, 3, 64

_CLASS_NAMES = {"odd": SymmetryClass.ODD, "even": SymmetryClass.EVEN,
                "quarter-odd": SymmetryClass.QUARTER_ODD}

_CHECKS = ("uniform", "zero-mean", "odd", "even", "quarter", "domination", "all")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; config errors are 64
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers

def parse_kernel(text: str) -> Kernel:
    name, _, rest = text.partition(":")
    name = name.strip().lower().replace("_", "-")
    params: dict[str, str] = {}
    if rest:
        for chunk in rest.split(","):
            key, _, val = chunk.partition("=")
            if not val:
                raise _UsageError(f"malformed kernel parameter {chunk!r}")
            params[key.strip().lower()] = val.strip()
    try:
        if name == "dirichlet":
            return Dirichlet(int(params["deg"]))
        if name == "bspline":
            return BSpline(int(params["n"]), int(params["mu"]))
        if name == "shifted-bspline":
            return ShiftedBSpline(int(params["n"]), int(params["mu"]))
        if name == "weighted":
            return Weighted(int(params["n"]), int(params["mu"]),
                            _parse_weight(params))
    except (KeyError, ValueError) as exc:
        raise _UsageError(f"bad kernel spec {text!r}: {exc}")
    raise _UsageError(f"unknown kernel family {name!r}")


def _parse_weight(params: dict[str, str]):
    family = params.get("family", "").replace("_", "-")
    if family == "poisson":
        return Poisson(float(params["alpha"]))
    if family == "heat":
        return Heat(float(params["alpha"]))
    if family == "diff-operator":
        roots = tuple(float(r) for r in params["roots"].split("|") if r)
        return DiffOperator(roots)
    if family == "bernoulli":
        return GeneralizedBernoulli(float(params["s"]),
                                    float(params.get("beta", "0")))
    raise _UsageError(f"unknown weight family {family!r}")


def kernel_from_config(obj) -> Kernel:
    if isinstance(obj, str):
        return parse_kernel(obj)
    if isinstance(obj, dict) and obj.get("type") == "custom":
        table = {int(k): complex(v[0], v[1]) for k, v in obj["coeffs"].items()}
        amp, exp = obj["decay"]

        def rule(k: int, _table=table) -> complex:
            return _table.get(k, 0.0 + 0.0j)

        return CustomKernel(rule, DecayBound(float(amp), float(exp)),
                            name=obj.get("name", "custom"),
                            zero_step=obj.get("zero_step"),
                            finite=obj.get("finite"),
                            shift_count=obj.get("shift_count"))
    raise _UsageError(f"cannot interpret kernel config {obj!r}")


def parse_range(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t]


# ---------------------------------------------------------------------------
# command implementations

def _overall_exit(overall: str) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL,
            "inconclusive": EXIT_INCONCLUSIVE}[overall]


def _report_rows(rep: conditions.ConditionReport) -> list[dict]:
    return [{"check": it.check, "condition": it.condition,
             "l": "" if it.index is None else it.index,
             "margin": it.margin, "slack": it.slack, "verdict": it.verdict}
            for it in rep.items]


_SPACE_FOR_CHECK = {"odd": SpaceKind.ODD, "even": SpaceKind.EVEN,
                    "quarter": SpaceKind.QUARTER_ODD}

_CHECK_FN = {"uniform": conditions.check_uniform_bound,
             "zero-mean": conditions.check_zero_mean_bound,
             "odd": conditions.check_odd_bound,
             "even": conditions.check_even_bound,
             "quarter": conditions.check_quarter_bound,
             "domination": conditions.check_coefficient_domination}


def _default_m(check: str, n: int) -> int:
    if check == "odd":
        return n - 1
    if check == "quarter":
        return (n - 1) // 2
    return n


def cmd_certify(opts) -> int:
    kernel = opts["kernel"]
    n = opts["n"] or kernel.natural_shift_count()
    if n is None:
        raise _UsageError("--n is required for this kernel")
    checks = [c for c in _CHECKS[:-1]] if opts["check"] == "all" else [opts["check"]]
    rows: list[dict] = []
    verdicts: list[str] = []
    for check in checks:
        m = opts["m"] if opts["m"] is not None else _default_m(check, n)
        cutoff = opts["K"] or 128 * n
        rep = _CHECK_FN[check](kernel, n, m, opts["r"], cutoff, tol=opts["tol"])
        rows += _report_rows(rep)
        verdicts.append(rep.overall)
        if opts["samples"] > 0 and check in _SPACE_FOR_CHECK and m >= 1:
            rng = np.random.default_rng(opts["seed"])
            space = ShiftSpaceSpec(kernel, n, _SPACE_FOR_CHECK[check], m)
            samples = [conditions.random_symmetric_polynomial(
                space.kind, 3 * n, rng) for _ in range(opts["samples"])]
            jrep = conditions.verify_jackson_bound(space, opts["r"], samples, cutoff)
            rows += _report_rows(jrep)
            verdicts.append(jrep.overall)
    overall = ("fail" if "fail" in verdicts
               else "inconclusive" if "inconclusive" in verdicts else "pass")
    meta = {"command": "certify", "kernel": kernel.label(), "n": n,
            "r": opts["r"], "overall": overall}
    report.write_report(rows, opts["out"], opts["format"], meta)
    if _plotting(opts):
        report.render_condition_figure(rows, report.figure_path(opts["out"]))
    return _overall_exit(overall)


def _width_row(sym_name: str, r: int, n: int, cutoff: int) -> dict:
    sym = _CLASS_NAMES[sym_name]
    cls = SmoothnessClass(sym, r)
    semiaxis = widths.ellipsoid_width(cls, n, cutoff)
    space = widths.optimal_trig_space(cls, n)
    lam = widths.worst_case_ratio(widths.RatioProblem(space, r, sym, cutoff))
    ratio_width = math.sqrt(lam)
    return {"class": sym_name, "r": r, "n": n,
            "semiaxis_width": semiaxis, "ratio_width": ratio_width,
            "abs_diff": abs(semiaxis - ratio_width)}


def cmd_widths(opts) -> int:
    classes = (list(_CLASS_NAMES) if opts["cls"] in (None, "all")
               else [opts["cls"]])
    rs = opts["r_list"] or [1, 2, 3]
    ns = opts["n_list"] or [1, 2, 3, 4, 5, 6]
    cutoff = opts["K"] or 4096
    tasks = [(c, r, n) for c in classes for r in rs for n in ns]
    threads = int(os.environ.get("SHIFTAPPROX_THREADS", "0")) or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda t: _width_row(t[0], t[1], t[2], cutoff), tasks))
    rows.sort(key=lambda row: (row["class"], row["r"], row["n"]))
    worst = max(row["abs_diff"] for row in rows)
    overall = "pass" if worst <= opts["tol"] else "fail"
    meta = {"command": "widths", "K": cutoff, "tol": opts["tol"],
            "max_abs_diff": worst, "overall": overall}
    report.write_report(rows, opts["out"], opts["format"], meta)
    if _plotting(opts):
        report.render_widths_figure(rows, report.figure_path(opts["out"]))
    return _overall_exit(overall)


_FAMILY_KIND = {0: SpaceKind.ODD, 1: SpaceKind.EVEN, 2: SpaceKind.QUARTER_ODD}


def cmd_project(opts) -> int:
    if not opts["input"]:
        raise _UsageError("project requires --input with a sampled CSV")
    kernel = opts["kernel"]
    family = opts["family"]
    if family is None or kernel is None:
        raise _UsageError("project requires --family and --kernel")
    n = opts["n"] or kernel.natural_shift_count()
    if n is None:
        raise _UsageError("--n is required for this kernel")
    m = opts["m"] if opts["m"] is not None else \
        {0: n - 1, 1: n, 2: (n - 1) // 2}[family]
    cutoff = opts["K"] or 128 * n
    sample = segment.read_sampled_csv(opts["input"])
    u = segment.periodize(sample, family, cutoff=cutoff)
    space = ShiftSpaceSpec(kernel, n, _FAMILY_KIND[family], m)
    proj = None
    from .spaces import project as project_space
    proj = project_space(u, space, cutoff)
    r = opts["r"]
    bound = conditions.space_bound(space, r)
    du_norm = spectra.l2_norm(spectra.derivative(u, r))
    rhs = bound * du_norm
    # periodic error relates to the segment error by the periodization factor
    factor = 2.0 if family == 2 else math.sqrt(2.0)
    ok = proj.error <= rhs + opts["tol"]
    rows = [{"family": family, "kernel": kernel.label(), "n": n, "m": m, "r": r,
             "K": cutoff, "periodic_error": proj.error,
             "segment_error": proj.error / factor,
             "bound_constant": bound, "derivative_norm": du_norm,
             "bound_rhs": rhs, "satisfied": ok}]
    meta = {"command": "project", "overall": "pass" if ok else "fail"}
    report.write_report(rows, opts["out"], opts["format"], meta)
    if _plotting(opts):
        report.render_project_figure(sample, family, proj.approximant,
                                     proj.error / factor, rhs / factor,
                                     report.figure_path(opts["out"]))
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_splines(opts) -> int:
    family, d, n = opts["family"], opts["d"], opts["n"]
    if family is None or d is None or n is None:
        raise _UsageError("splines requires --family, --d and --n")
    parity_text = opts["parity"] or "matched"
    parity = (matched_parity(family, d) if parity_text == "matched"
              else KnotParity(parity_text))
    spec = SplineSpaceSpec(d, family, n, parity)
    cutoff = opts["K"] or 512 * n
    dim = segment.dimension_check(spec, cutoff)
    dim_ok = dim == n
    boundary = [segment.verify_boundary(el, family, d, tol=opts["tol"])
                for el in segment.q_space_basis(spec, cutoff)]
    bmax = max((b.max_residual for b in boundary), default=0.0)
    b_ok = bmax <= opts["tol"]
    if d >= 1:
        knot_rep = segment.detect_knots(spec, cutoff)
        knots_ok = knot_rep.ok
        detected = ";".join(f"{t:.6g}" for t in knot_rep.detected)
        spurious = knot_rep.spurious
    else:
        knots_ok, detected, spurious = True, "", 0
    expected = ";".join(f"{t:.6g}" for t in
                        segment.uniform_knots(family, parity, n).knots)
    ok = dim_ok and b_ok and knots_ok
    rows = [{"family": family, "d": d, "n": n, "parity": parity.value,
             "K": cutoff, "dimension": dim, "dimension_expected": n,
             "dimension_ok": dim_ok, "boundary_max_residual": bmax,
             "boundary_tol": opts["tol"], "boundary_ok": b_ok,
             "knots_expected": expected, "knots_detected": detected,
             "spurious_windows": spurious, "knots_ok": knots_ok}]
    meta = {"command": "splines", "overall": "pass" if ok else "fail"}
    report.write_report(rows, opts["out"], opts["format"], meta)
    if _plotting(opts):
        report.render_splines_figure(spec, cutoff, report.figure_path(opts["out"]))
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_kernels(opts) -> int:
    rows = catalog()
    report.write_report(rows, opts["out"], opts["format"],
                        {"command": "kernels", "overall": "pass"})
    return EXIT_PASS


def _plotting(opts) -> bool:
    return bool(opts["out"]) and opts["out"] != "-" and not opts["no_plot"]


# ---------------------------------------------------------------------------
# argument wiring

def _add_common(p: _Parser) -> None:
    p.add_argument("--kernel", help="generator, e.g. bspline:n=8,mu=3")
    p.add_argument("--n", type=int, help="shift count / dimension parameter")
    p.add_argument("--m", type=int, help="space size parameter")
    p.add_argument("--r", type=int, default=None, help="smoothness order")
    p.add_argument("--K", type=int, default=None, help="frequency cutoff")
    p.add_argument("--class", dest="cls",
                   choices=list(_CLASS_NAMES) + ["all"], help="symmetry class")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for random suites")
    p.add_argument("--out", help="output path ('-' = stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure rendered alongside a file report")


def build_parser() -> _Parser:
    parser = _Parser(prog="shiftapprox",
                     description="verification toolkit for shift-generated "
                                 "approximation spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="check the coefficient conditions")
    _add_common(p)
    p.add_argument("--check", choices=_CHECKS, default="all")
    p.add_argument("--samples", type=int, default=0,
                   help="also verify the bound on this many random samples")

    p = sub.add_parser("widths", help="width table: semiaxis vs ratio oracle")
    _add_common(p)
    p.add_argument("--r-list", dest="r_list", help="orders, e.g. 1..3 or 1,2")
    p.add_argument("--n-list", dest="n_list", help="dimensions, e.g. 1..6")

    p = sub.add_parser("project", help="project a sampled segment function")
    _add_common(p)
    p.add_argument("--input", help="two-column x,value CSV")
    p.add_argument("--family", type=int, choices=(0, 1, 2))

    p = sub.add_parser("splines", help="verify a uniform-knot spline space")
    _add_common(p)
    p.add_argument("--family", type=int, choices=(0, 1, 2))
    p.add_argument("--d", type=int, help="spline degree")
    p.add_argument("--parity", choices=("integer", "half-shifted", "matched"))

    p = sub.add_parser("kernels", help="list the generator catalog")
    _add_common(p)
    return parser


_DEFAULT_TOL = {"certify": 1e-9, "widths": 1e-8, "project": 1e-9,
                "splines": 1e-8, "kernels": 1e-9}


_FLAG_DEFAULTS = {"r": None, "K": None, "tol": None, "seed": 0, "format": "csv",
                  "check": "all", "samples": 0, "no_plot": False}


def _gather(args: argparse.Namespace) -> dict:
    opts = vars(args).copy()
    if opts.get("config"):
        try:
            loaded = json.loads(Path(opts["config"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise _UsageError(f"cannot read config: {exc}")
        if not isinstance(loaded, dict):
            raise _UsageError("config must be a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key == "class":
                key = "cls"
            if key not in opts:
                raise _UsageError(f"unknown config key {key!r}")
            # explicit command-line values win over the config file
            if opts[key] == _FLAG_DEFAULTS.get(key, None):
                opts[key] = value
    if isinstance(opts.get("kernel"), str):
        opts["kernel"] = parse_kernel(opts["kernel"])
    elif opts.get("kernel") is not None and not isinstance(opts["kernel"], Kernel):
        opts["kernel"] = kernel_from_config(opts["kernel"])
    for key in ("r_list", "n_list"):
        if isinstance(opts.get(key), str):
            opts[key] = parse_range(opts[key])
    if opts.get("r") is None:
        opts["r"] = 1
    if opts.get("tol") is None:
        opts["tol"] = _DEFAULT_TOL[opts["command"]]
    for key in ("n", "m", "K", "input", "family", "d", "parity", "cls",
                "r_list", "n_list", "samples", "check", "out"):
        opts.setdefault(key, None)
    return opts


_COMMANDS = {"certify": cmd_certify, "widths": cmd_widths,
             "project": cmd_project, "splines": cmd_splines,
             "kernels": cmd_kernels}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        opts = _gather(args)
        return _COMMANDS[opts["command"]](opts)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
