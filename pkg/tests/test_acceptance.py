"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here; nothing is deferred to later calibration.
Run as `pytest tests/test_acceptance.py -v -s` to see the per-criterion lines.
"""

import cmath
import math
import time

import numpy as np

from shiftapprox import (BSpline, Dirichlet, KnotParity, RatioProblem,
                         ShiftSpaceSpec, ShiftedBSpline, SmoothnessClass,
                         SpaceKind, SplineSpaceSpec, SymmetryClass, basis,
                         brute_force_projection, check_coefficient_domination,
                         check_even_bound, check_odd_bound, check_quarter_bound,
                         check_uniform_bound, detect_knots, dimension_check,
                         optimal_trig_space, project, q_space_basis,
                         random_symmetric_polynomial, reflection_coefficient,
                         shift, spectrum, truncate, verify_boundary,
                         verify_jackson_bound, verify_refined_bounds,
                         worst_case_ratio)
from shiftapprox.spaces import basis_function
from shiftapprox.spectra import evaluate_grid, inner_product


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


EXPECTED_WIDTH = {
    SymmetryClass.ODD: lambda n, r: (n + 1.0) ** (-r),
    SymmetryClass.EVEN: lambda n, r: float(n) ** (-r),
    SymmetryClass.QUARTER_ODD: lambda n, r: (2.0 * n + 1.0) ** (-r),
}


def test_criterion_1_width_reproduction():
    t0 = time.time()
    worst = 0.0
    for sym in (SymmetryClass.ODD, SymmetryClass.EVEN, SymmetryClass.QUARTER_ODD):
        for r in (1, 2, 3):
            for n in range(1, 7):
                space = optimal_trig_space(SmoothnessClass(sym, r), n)
                lam = worst_case_ratio(RatioProblem(space, r, sym, 4096))
                worst = max(worst, abs(math.sqrt(lam) - EXPECTED_WIDTH[sym](n, r)))
    elapsed = time.time() - t0
    ok = worst <= 1e-8 and elapsed < 10.0
    _report(1, ok, f"54 width values, max abs deviation {worst:.2e}, "
                   f"{elapsed:.1f}s (< 10s)")


def test_criterion_2_jackson_bounds_and_sharpness():
    t0 = time.time()
    rng = np.random.default_rng(0xACCE)
    configs = 0
    worst_eq = 0.0
    for kernel_cls in (BSpline, ShiftedBSpline):
        for r in (1, 2, 3):
            for mu in range(r - 1, r + 3):
                for kind, check, ns in (
                        (SpaceKind.ODD, check_odd_bound, range(2, 9)),
                        (SpaceKind.EVEN, check_even_bound, range(1, 9)),
                        (SpaceKind.QUARTER_ODD, check_quarter_bound, range(3, 9))):
                    for n in ns:
                        m = {SpaceKind.ODD: n - 1, SpaceKind.EVEN: n,
                             SpaceKind.QUARTER_ODD: (n - 1) // 2}[kind]
                        kernel = kernel_cls(n, mu)
                        cutoff = 64 * n
                        cert = check(kernel, n, m, r, cutoff)
                        assert cert.overall == "pass", \
                            (kernel.label(), kind.value, m, r, cert.overall)
                        space = ShiftSpaceSpec(kernel, n, kind, m)
                        samples = [random_symmetric_polynomial(kind, 3 * n, rng)
                                   for _ in range(100)]
                        rep = verify_jackson_bound(space, r, samples, cutoff,
                                                   equality_tol=1e-10)
                        assert rep.overall == "pass", \
                            (kernel.label(), kind.value, m, r)
                        eq = rep.item("witness-equality")
                        worst_eq = max(worst_eq, 1e-10 - eq.margin)
                        configs += 1
    elapsed = time.time() - t0
    ok = elapsed < 60.0
    _report(2, ok, f"{configs} configurations certified, 100 samples each, "
                   f"witness equality gap <= {worst_eq:.2e} (tol 1e-10), "
                   f"{elapsed:.1f}s (< 60s)")


def test_criterion_3_counterexample_sensitivity():
    n = m = 4
    r = 3
    details = []
    for mu in (0, 1):  # both undersmoothed degrees: mu + 1 < r
        kernel = BSpline(n, mu)
        decay = check_coefficient_domination(kernel, n, m, r, 512)
        sums = check_uniform_bound(kernel, n, m, r, 512)
        decay_failed = any(it.verdict == "fail" and it.condition == "domination"
                           for it in decay.items)
        sum_failed = any(it.verdict == "fail" and it.condition == "signed-sum"
                         for it in sums.items)
        space = ShiftSpaceSpec(kernel, n, SpaceKind.CROSS_LOW, m)
        lam = worst_case_ratio(RatioProblem(space, r, None, 512, zero_mean=True))
        margin = lam - float(m) ** (-2 * r)
        details.append((mu, decay_failed, sum_failed, margin))
    ok = all(df and sf and mg > 0.0 for _, df, sf, mg in details)
    text = "; ".join(f"mu={mu}: decay-fail={df}, sum-fail={sf}, "
                     f"ratio excess {mg:.3e}" for mu, df, sf, mg in details)
    _report(3, ok, text)


def test_criterion_4_orthogonality_and_identity_suite():
    worst_gram = 0.0
    worst_shift = 0.0
    worst_gamma = 0.0
    xs = np.linspace(-math.pi, math.pi, 64, endpoint=False)
    for n in range(1, 9):
        for mu in range(0, 5):
            kernel = BSpline(n, mu)
            cutoff = 32 * n
            elements = basis(ShiftSpaceSpec(kernel, n, SpaceKind.CROSS), cutoff)
            scale = max(2 * math.pi * el.d_norm for el in elements)
            for i, a in enumerate(elements):
                for b in elements[i + 1:]:
                    worst_gram = max(worst_gram,
                                     abs(inner_product(a.spectrum, b.spectrum)) / scale)
            for l in range(1 - n, n + 1):
                el = basis_function(kernel, n, l, cutoff)
                if el.d_norm == 0.0:
                    continue
                lhs = evaluate_grid(el.spectrum, xs + math.pi)
                rhs = (-1) ** l * evaluate_grid(el.spectrum, xs)
                ref = max(1.0, np.abs(rhs).max())
                worst_shift = max(worst_shift, np.abs(lhs - rhs).max() / ref)
            for l in range(1, n):
                g = reflection_coefficient(kernel, n, l, cutoff)
                target = cmath.exp(-1j * math.pi * l * (mu + 1) / n)
                worst_gamma = max(worst_gamma, abs(g - target))
    ok = worst_gram <= 1e-10 and worst_shift <= 1e-10 and worst_gamma <= 1e-10
    _report(4, ok, f"gram off-diag <= {worst_gram:.2e}, half-period identity "
                   f"<= {worst_shift:.2e}, reflection ratio error <= "
                   f"{worst_gamma:.2e} (all tol 1e-10)")


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(0x0513)
    worst = 0.0
    count = 0
    menu = [(BSpline(3, 1), 3), (BSpline(5, 2), 5), (ShiftedBSpline(4, 2), 4),
            (Dirichlet(4), 5)]
    kinds = [(SpaceKind.CROSS, None), (SpaceKind.CROSS_LOW, 2),
             (SpaceKind.ODD, 2), (SpaceKind.EVEN, 3), (SpaceKind.QUARTER_ODD, 1)]
    while count < 120:
        kernel, n = menu[count % len(menu)]
        kind, m = kinds[count % len(kinds)]
        if kind is SpaceKind.CROSS and isinstance(kernel, Dirichlet):
            kind, m = SpaceKind.CROSS_LOW, 2  # full cross of a Dirichlet is degenerate
        space = ShiftSpaceSpec(kernel, n, kind, m)
        cutoff = 64 * n
        f = spectrum({k: complex(rng.standard_normal(), rng.standard_normal())
                      for k in range(-3 * n, 3 * n + 1)})
        res = project(f, space, cutoff)
        raw = [el.spectrum for el in basis(space, cutoff)]
        _, err = brute_force_projection(f, raw)
        worst = max(worst, abs(res.error - err) / max(res.error, err))
        count += 1
    # raw equidistant translates of the generator, the original spanning set
    while count < 200:
        n = 2 + count % 4
        kernel = BSpline(n, 1 + count % 3)
        cutoff = 64 * n
        base = truncate(kernel, cutoff)
        raw = [shift(base, j * math.pi / n) for j in range(2 * n)]
        f = spectrum({k: complex(rng.standard_normal(), rng.standard_normal())
                      for k in range(-3 * n, 3 * n + 1)})
        _, err = brute_force_projection(f, raw)
        res = project(f, ShiftSpaceSpec(kernel, n, SpaceKind.FULL), cutoff)
        worst = max(worst, abs(res.error - err) / max(res.error, err))
        count += 1
    ok = worst <= 1e-9
    _report(5, ok, f"200 instances (80 raw-translate), max relative "
                   f"disagreement {worst:.2e} (tol 1e-9)")


def test_criterion_6_spline_table():
    t0 = time.time()
    checked = 0
    for family, parity in ((0, KnotParity.INTEGER), (0, KnotParity.HALF_SHIFTED),
                           (1, KnotParity.INTEGER), (1, KnotParity.HALF_SHIFTED),
                           (2, KnotParity.INTEGER), (2, KnotParity.HALF_SHIFTED)):
        for d in range(0, 6):
            for n in range(1, 6):
                spec = SplineSpaceSpec(d, family, n, parity)
                cutoff = 512 * n
                dim = dimension_check(spec, cutoff)
                assert dim == n, (family, parity.value, d, n, dim)
                for el in q_space_basis(spec, cutoff):
                    rep = verify_boundary(el, family, d, tol=1e-8)
                    assert rep.ok, (family, parity.value, d, n, rep.max_residual)
                if d >= 1:
                    knots = detect_knots(spec, cutoff)
                    assert knots.ok, (family, parity.value, d, n,
                                      knots.spurious, knots.detected)
                checked += 1
    elapsed = time.time() - t0
    ok = elapsed < 120.0
    _report(6, ok, f"{checked} spline configurations: dimension, boundary "
                   f"(1e-8), knot localization all pass, {elapsed:.1f}s (< 120s)")


def test_criterion_7_refined_bounds():
    rng = np.random.default_rng(0x7A11)
    worst_gap = math.inf
    for r in (1, 2):
        for kind, m in ((SpaceKind.ODD, 5), (SpaceKind.EVEN, 6),
                        (SpaceKind.QUARTER_ODD, 2)):
            n = 6
            space = ShiftSpaceSpec(BSpline(n, r + 1), n, kind, m)
            samples = [random_symmetric_polynomial(kind, 2 * n, rng)
                       for _ in range(50)]
            rep = verify_refined_bounds(space, r, samples, 64 * n)
            assert rep.overall == "pass", (kind.value, r, rep.overall)
            for it in rep.items:
                if it.condition == "refined-below-plain":
                    worst_gap = min(worst_gap, it.margin)
    ok = worst_gap >= 0.0
    _report(7, ok, f"6 parity/order cases, 50 samples each; refined bound "
                   f"below plain bound by at least {worst_gap:.3e}")
