"""Machine-checkable verdicts for the coefficient conditions behind the
mean-square approximation bounds, plus empirical verification of the bounds
themselves on random symmetric samples.

Every verdict is three-valued.  An item carries a numeric margin together
with a truncation slack that bounds what the discarded frequencies could
contribute; the item passes only when the margin clears the slack, fails
only when it clears it in the other direction, and is reported inconclusive
when the certificate is too weak at the working cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spectra
from .kernels import Kernel, class_tail_l2_mass, class_tail_sup
from .spaces import (NO_REFLECTION, BasisElement, ShiftSpaceSpec, SpaceKind,
                     basis, basis_function, projection_error_onto,
                     reflection_coefficient)
from .spectra import (InsufficientDecayError, SymmetryClass, TruncatedSpectrum,
                      derivative, even_part, odd_part)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


class SampleOutsideClassError(ValueError):
    """A sample handed to an empirical bound check lacks the required symmetry."""


@dataclass(frozen=True)
class ConditionItem:
    check: str
    condition: str
    index: int | None
    margin: float
    slack: float

    @property
    def verdict(self) -> str:
        if self.margin > self.slack:
            return PASS
        if self.margin < -self.slack:
            return FAIL
        return INCONCLUSIVE


@dataclass(frozen=True)
class ConditionReport:
    name: str
    items: tuple[ConditionItem, ...]
    params: dict = field(default_factory=dict)

    @property
    def overall(self) -> str:
        verdicts = [it.verdict for it in self.items]
        if any(v == FAIL for v in verdicts):
            return FAIL
        if any(v == INCONCLUSIVE for v in verdicts):
            return INCONCLUSIVE
        return PASS

    def item(self, condition: str, index: int | None = None) -> ConditionItem:
        for it in self.items:
            if it.condition == condition and (index is None or it.index == index):
                return it
        raise KeyError(f"no item {condition}[{index}]")


# ---------------------------------------------------------------------------
# shared item builders

def _class_freqs(n: int, l: int, cutoff: int) -> list[int]:
    step = 2 * n
    out = []
    j = -(cutoff + l) // step
    while True:
        f = l + step * j
        if f > cutoff:
            break
        if f >= -cutoff:
            out.append(f)
        j += 1
    out.sort(key=lambda f: (abs(f), f))
    return out


def _analytically_zero_beyond(kernel: Kernel, n: int, cutoff: int) -> bool:
    """True when every frequency of the zero class beyond the cutoff is an
    exact zero of the closed form."""
    fin = kernel.finite_degree()
    if fin is not None and fin <= cutoff:
        return True
    step = kernel.zero_residue_step()
    return step is not None and (2 * n) % step == 0


def _nonzero_item(check: str, kernel: Kernel, l: int, tol: float) -> ConditionItem:
    return ConditionItem(check, "coeff-nonzero", l,
                         abs(kernel.coeff(l)) - tol, 0.0)


def _residue_zero_item(check: str, kernel: Kernel, n: int, cutoff: int,
                       tol: float) -> ConditionItem:
    observed = 0.0
    f = 2 * n
    while f <= cutoff:
        observed = max(observed, abs(kernel.coeff(f)), abs(kernel.coeff(-f)))
        f += 2 * n
    if _analytically_zero_beyond(kernel, n, cutoff):
        slack = 0.0
    else:
        dec = kernel.class_decay(2 * n, 0, cutoff)
        slack = class_tail_sup(dec, cutoff, 0.0) if dec is not None else math.inf
    return ConditionItem(check, "residue-zero", 0, tol - observed, slack)


def _pair_symmetric_item(check: str, kernel: Kernel, n: int, cutoff: int,
                         tol: float) -> ConditionItem:
    observed = 0.0
    f = 2 * n
    while f <= cutoff:
        observed = max(observed, abs(kernel.coeff(f) - kernel.coeff(-f)))
        f += 2 * n
    if _analytically_zero_beyond(kernel, n, cutoff) \
            or kernel.reflection_ratio_exact(n, 0) == 1.0:
        slack = 0.0
    else:
        dec = kernel.class_decay(2 * n, 0, cutoff)
        slack = 2.0 * class_tail_sup(dec, cutoff, 0.0) if dec is not None else math.inf
    return ConditionItem(check, "pair-symmetric", 0, tol - observed, slack)


def _reflection_item(check: str, kernel: Kernel, n: int, l: int, cutoff: int,
                     tol: float) -> ConditionItem:
    g = reflection_coefficient(kernel, n, l, cutoff, tol=math.inf)
    if g is NO_REFLECTION:
        return ConditionItem(check, "reflection", l, -math.inf, 0.0)
    fs = _class_freqs(n, l, cutoff)
    den = math.fsum(abs(kernel.coeff(f)) ** 2 for f in fs)
    if den == 0.0:
        # whole class vanishes; any nonzero ratio satisfies the identity
        return ConditionItem(check, "reflection", l, tol, 0.0)
    resid_sq = math.fsum(abs(kernel.coeff(-f) - g * kernel.coeff(f)) ** 2 for f in fs)
    residual = math.sqrt(resid_sq / den)
    if kernel.reflection_ratio_exact(n, l) is not None \
            or (kernel.finite_degree() or math.inf) <= cutoff:
        slack = 0.0
    else:
        dec = kernel.class_decay(2 * n, l, cutoff)
        if dec is None:
            slack = math.inf
        else:
            tail = class_tail_l2_mass(dec, cutoff, 2 * n)
            slack = (1.0 + abs(g)) * math.sqrt(tail / den)
    return ConditionItem(check, "reflection", l, tol - residual, slack)


def _signed_sum_item(check: str, kernel: Kernel, n: int, l: int, big_m: int,
                     r: int, cutoff: int, tol: float) -> ConditionItem:
    """Sum over the class of |c_f|^2 / (1/f^(2r) - 1/M^(2r)), accumulated from
    the innermost frequency outward; must be nonnegative.

    Beyond the cutoff every term is negative with denominator magnitude at
    least 1/M^(2r) - 1/cutoff^(2r), which bounds the discarded contribution.
    Kernels at the exact smoothing order make the sum vanish identically, so
    no finite truncation can settle the sign numerically; the coefficient
    domination condition implies nonnegativity and provides a slack-free
    certificate whenever it holds for the class.
    """
    inv_m = 1.0 / float(big_m) ** (2 * r)
    terms = []
    for f in _class_freqs(n, l, cutoff):
        c2 = abs(kernel.coeff(f)) ** 2
        if c2 == 0.0:
            continue
        denom = 1.0 / float(f) ** (2 * r) - inv_m
        if denom == 0.0:
            raise ArithmeticError(f"vanishing denominator at frequency {f}")
        terms.append(c2 / denom)
    total = math.fsum(terms)
    dec = kernel.class_decay(2 * n, l, cutoff)
    if (kernel.finite_degree() or math.inf) <= cutoff:
        slack = 0.0
    elif dec is None:
        slack = math.inf
    else:
        denom_floor = inv_m - 1.0 / float(cutoff) ** (2 * r)
        slack = class_tail_l2_mass(dec, cutoff, 2 * n) / denom_floor
    if not total > slack and total > 0.0:
        dom = _domination_item(check, kernel, n, l, r, cutoff, tol)
        if dom.verdict == PASS:
            slack = 0.0
    return ConditionItem(check, "signed-sum", l, total, slack)


def _domination_item(check: str, kernel: Kernel, n: int, l: int, r: int,
                     cutoff: int, tol: float) -> ConditionItem:
    """|f|^r |c_f| <= |l|^r |c_l| over the class; equality is allowed, so the
    pass floor is the user tolerance while the slack stays purely truncational."""
    base = abs(l) ** r * abs(kernel.coeff(l))
    sup_stored = 0.0
    for f in _class_freqs(n, l, cutoff):
        if f == l:
            continue
        sup_stored = max(sup_stored, abs(f) ** r * abs(kernel.coeff(f)))
    if (kernel.finite_degree() or math.inf) <= cutoff:
        sup_tail = 0.0
    else:
        dec = kernel.class_decay(2 * n, l, cutoff)
        sup_tail = class_tail_sup(dec, cutoff, float(r)) if dec is not None else math.inf
    if sup_stored > base + tol:
        return ConditionItem(check, "domination", l, base + tol - sup_stored, 0.0)
    if math.isinf(sup_tail):
        return ConditionItem(check, "domination", l, base + tol - sup_stored, math.inf)
    return ConditionItem(check, "domination", l,
                         base + tol - max(sup_stored, sup_tail), 0.0)


# ---------------------------------------------------------------------------
# condition sets

def check_uniform_bound(kernel: Kernel, n: int, m: int, r: int, cutoff: int,
                        tol: float = 1e-9) -> ConditionReport:
    """Conditions equivalent to the uniform bound m^-r ||f^(r)|| for the
    cross space over the full smoothness class: the low coefficients do not
    vanish, the zero residue class is trivial beyond c_0, and the signed
    class sums are nonnegative."""
    _validate(n, m, r, cutoff, require=m <= n)
    name = "uniform-bound"
    items = [_nonzero_item(name, kernel, l, tol) for l in range(1 - m, m)]
    items.append(_residue_zero_item(name, kernel, n, cutoff, tol))
    for l in range(1, m):
        items.append(_signed_sum_item(name, kernel, n, l, m, r, cutoff, tol))
        items.append(_signed_sum_item(name, kernel, n, -l, m, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def check_zero_mean_bound(kernel: Kernel, n: int, m: int, r: int, cutoff: int,
                          tol: float = 1e-9) -> ConditionReport:
    """Same bound restricted to zero-mean functions: drops the zero-class
    conditions entirely."""
    _validate(n, m, r, cutoff, require=m <= n)
    name = "zero-mean-bound"
    items = []
    for l in range(1, m):
        items.append(_nonzero_item(name, kernel, l, tol))
        items.append(_nonzero_item(name, kernel, -l, tol))
        items.append(_signed_sum_item(name, kernel, n, l, m, r, cutoff, tol))
        items.append(_signed_sum_item(name, kernel, n, -l, m, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def check_odd_bound(kernel: Kernel, n: int, m: int, r: int, cutoff: int,
                    tol: float = 1e-9) -> ConditionReport:
    """Conditions under which the m-dimensional odd-part space approximates
    every odd function with error (m+1)^-r ||u^(r)||."""
    _validate(n, m, r, cutoff, require=m + 1 <= n)
    name = "odd-bound"
    items = [_reflection_item(name, kernel, n, l, cutoff, tol) for l in range(1, m + 1)]
    items.append(_pair_symmetric_item(name, kernel, n, cutoff, tol))
    for l in range(1, m + 1):
        items.append(_nonzero_item(name, kernel, l, tol))
        items.append(_signed_sum_item(name, kernel, n, l, m + 1, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def check_even_bound(kernel: Kernel, n: int, m: int, r: int, cutoff: int,
                     tol: float = 1e-9) -> ConditionReport:
    """Conditions under which the constant-plus-even-parts space approximates
    every even function with error m^-r ||u^(r)||."""
    _validate(n, m, r, cutoff, require=m <= n)
    name = "even-bound"
    items = [_reflection_item(name, kernel, n, l, cutoff, tol) for l in range(1, m)]
    items += [_nonzero_item(name, kernel, l, tol) for l in range(0, m)]
    items.append(_residue_zero_item(name, kernel, n, cutoff, tol))
    for l in range(1, m):
        items.append(_signed_sum_item(name, kernel, n, l, m, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def check_quarter_bound(kernel: Kernel, n: int, m: int, r: int, cutoff: int,
                        tol: float = 1e-9) -> ConditionReport:
    """Conditions under which the odd-parts-on-odd-classes space approximates
    every quarter-symmetric odd function with error (2m+1)^-r ||u^(r)||."""
    _validate(n, m, r, cutoff, require=2 * m + 1 <= n)
    name = "quarter-bound"
    items = [_reflection_item(name, kernel, n, l, cutoff, tol)
             for l in range(1, 2 * m + 1)]
    items.append(_pair_symmetric_item(name, kernel, n, cutoff, tol))
    for l in range(1, 2 * m + 1):
        items.append(_nonzero_item(name, kernel, l, tol))
        items.append(_signed_sum_item(name, kernel, n, l, 2 * m + 1, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def check_coefficient_domination(kernel: Kernel, n: int, m: int, r: int,
                                 cutoff: int, tol: float = 1e-9) -> ConditionReport:
    """The easily checkable decay condition |f|^r |c_f| <= |l|^r |c_l| on every
    class |l| in [1:m-1]; it implies the signed-sum conditions."""
    _validate(n, m, r, cutoff, require=m <= n)
    name = "domination"
    items = []
    for l in range(1, m):
        items.append(_domination_item(name, kernel, n, l, r, cutoff, tol))
        items.append(_domination_item(name, kernel, n, -l, r, cutoff, tol))
    return ConditionReport(name, tuple(items),
                           dict(kernel=kernel.label(), n=n, m=m, r=r, K=cutoff))


def _validate(n: int, m: int, r: int, cutoff: int, require: bool) -> None:
    if r < 1:
        raise ValueError("smoothness order r must be >= 1")
    if not require:
        raise ValueError(f"inadmissible m={m} for n={n}")
    if cutoff < 2 * n:
        raise ValueError("cutoff must be at least 2n")


# ---------------------------------------------------------------------------
# empirical verification of the bounds

_BOUND_EXP = {SpaceKind.ODD: lambda m: m + 1,
              SpaceKind.EVEN: lambda m: m,
              SpaceKind.QUARTER_ODD: lambda m: 2 * m + 1,
              SpaceKind.QUARTER_EVEN: lambda m: 2 * m + 1}

_WITNESS = {SpaceKind.ODD: lambda m: spectra.sin_spectrum(m + 1),
            SpaceKind.EVEN: lambda m: spectra.cos_spectrum(m),
            SpaceKind.QUARTER_ODD: lambda m: spectra.sin_spectrum(2 * m + 1),
            SpaceKind.QUARTER_EVEN: lambda m: spectra.cos_spectrum(2 * m + 1)}


def space_bound(space: ShiftSpaceSpec, r: int) -> float:
    """The certified error constant for the symmetric space: bound * ||u^(r)||."""
    try:
        return float(_BOUND_EXP[space.kind](space.m)) ** (-r)
    except KeyError:
        raise ValueError(f"no bound constant for space kind {space.kind.value}")


def sample_defect(u: TruncatedSpectrum, kind: SpaceKind) -> float:
    """Coefficientwise violation of the symmetry the space serves."""
    if kind is SpaceKind.ODD:
        return spectra.symmetry_defect(u, SymmetryClass.ODD)
    if kind is SpaceKind.EVEN:
        return spectra.symmetry_defect(u, SymmetryClass.EVEN)
    if kind is SpaceKind.QUARTER_ODD:
        return spectra.symmetry_defect(u, SymmetryClass.QUARTER_ODD)
    if kind is SpaceKind.QUARTER_EVEN:
        worst = spectra.symmetry_defect(u, SymmetryClass.EVEN)
        for k, c in u.coeffs.items():
            if k % 2 == 0:
                worst = max(worst, abs(c))
        return worst
    raise ValueError(f"space kind {kind.value} has no symmetry class")


def verify_jackson_bound(space: ShiftSpaceSpec, r: int,
                         samples: list[TruncatedSpectrum], cutoff: int,
                         class_tol: float = 1e-12,
                         equality_tol: float = 1e-10) -> ConditionReport:
    """Check error(project(u)) <= bound * ||u^(r)|| on every sample and that
    the first excluded harmonic attains the bound with equality."""
    bound = space_bound(space, r)
    elements = basis(space, cutoff)
    items = []
    name = "jackson"
    for i, u in enumerate(samples):
        defect = sample_defect(u, space.kind)
        if defect > class_tol:
            raise SampleOutsideClassError(
                f"sample {i} violates the class symmetry by {defect:g}")
        du = derivative(u, r)
        rhs = bound * spectra.l2_norm(du)
        error, err_slack = projection_error_onto(u, elements)
        # the true error lies within sqrt(error^2 + err_slack), so the margin
        # is certified up to that gap plus rounding
        slack = math.sqrt(error**2 + err_slack) - error + 1e-13 * max(rhs, 1.0)
        items.append(ConditionItem(name, "bound", i, rhs - error, slack))
    w = _WITNESS[space.kind](space.m)
    rhs_w = bound * spectra.l2_norm(derivative(w, r))
    err_w, _ = projection_error_onto(w, elements)
    items.append(ConditionItem(name, "witness-equality", None,
                               equality_tol - abs(err_w - rhs_w), 0.0))
    return ConditionReport(name, tuple(items),
                           dict(kernel=space.kernel.label(), n=space.n,
                                kind=space.kind.value, m=space.m, r=r, K=cutoff))


def _derived_elements(elements: list[BasisElement], r: int) -> list[BasisElement]:
    """Differentiate a symmetric basis r times; constants drop out."""
    out = []
    for el in elements:
        if el.index == 0:
            continue
        spec = derivative(el.spectrum, r)
        stored = math.fsum(abs(c) ** 2 for c in spec.coeffs.values())
        tail_mass = spec.tail_bound ** 2
        out.append(BasisElement(el.kind, el.index, spec, stored, stored + tail_mass))
    return out


def verify_refined_bounds(space: ShiftSpaceSpec, r: int,
                          samples: list[TruncatedSpectrum], cutoff: int,
                          class_tol: float = 1e-12,
                          identity_tol: float = 1e-12) -> ConditionReport:
    """Check the sharpened bounds where ||u^(r)|| is replaced by the distance
    of u^(r) from the differentiated space, which never exceeds the plain bound.

    Requires the generator itself to be r-times differentiable with a
    certifiable tail (decay exponent > r + 1/2).
    """
    dec = space.kernel.decay()
    fin = space.kernel.finite_degree()
    if fin is None and (dec is None or dec.exponent <= r + 0.5):
        raise InsufficientDecayError(
            f"{space.kernel.label()} is not certifiably {r}-times differentiable")
    bound = space_bound(space, r)
    elements = basis(space, cutoff)
    derived = _derived_elements(elements, r)
    name = "refined-bound"
    items = []
    # parity bookkeeping of differentiation: the odd/even split commutes with
    # taking r derivatives up to a swap for odd r
    for el in elements[:2]:
        if el.index == 0:
            continue
        full = basis_function(space.kernel, space.n, el.index, cutoff)
        dfull = derivative(full.spectrum, r)
        part = odd_part if (el.kind == "phi_odd") == (r % 2 == 0) else even_part
        lhs = derivative(el.spectrum, r)
        rhs = part(dfull)
        diff = max((abs(lhs.coeff(k) - rhs.coeff(k))
                    for k in set(lhs.coeffs) | set(rhs.coeffs)), default=0.0)
        items.append(ConditionItem(name, "derivative-parity", el.index,
                                   identity_tol - diff, 0.0))
    for i, u in enumerate(samples):
        defect = sample_defect(u, space.kind)
        if defect > class_tol:
            raise SampleOutsideClassError(
                f"sample {i} violates the class symmetry by {defect:g}")
        du = derivative(u, r)
        derr, derr_slack = projection_error_onto(du, derived)
        refined = bound * derr
        plain = bound * spectra.l2_norm(du)
        error, err_slack = projection_error_onto(u, elements)
        slack = math.sqrt(error**2 + err_slack) - error \
            + bound * (math.sqrt(derr**2 + derr_slack) - derr) \
            + 1e-12 * max(plain, 1.0)
        items.append(ConditionItem(name, "refined", i, refined - error, slack))
        items.append(ConditionItem(name, "refined-below-plain", i,
                                   plain - refined + 1e-12 * max(plain, 1.0), 0.0))
    return ConditionReport(name, tuple(items),
                           dict(kernel=space.kernel.label(), n=space.n,
                                kind=space.kind.value, m=space.m, r=r, K=cutoff))


# ---------------------------------------------------------------------------
# sample generation

def random_symmetric_polynomial(kind: SpaceKind, degree: int,
                                rng: np.random.Generator) -> TruncatedSpectrum:
    """Random trigonometric polynomial with the exact symmetry the space
    kind serves, imposed coefficientwise.  Needs degree >= 1 so the result
    always has a nonconstant part (the bound ratios are undefined otherwise)."""
    if degree < 1:
        raise ValueError("sample degree must be >= 1")
    coeffs: dict[int, complex] = {}
    if kind is SpaceKind.ODD:
        ks = range(1, degree + 1)
    elif kind is SpaceKind.EVEN:
        ks = range(0, degree + 1)
    elif kind in (SpaceKind.QUARTER_ODD, SpaceKind.QUARTER_EVEN):
        ks = range(1, degree + 1, 2)
    else:
        raise ValueError(f"space kind {kind.value} has no symmetry class")
    for k in ks:
        z = complex(rng.standard_normal(), rng.standard_normal())
        if k == 0:
            coeffs[0] = z
            continue
        coeffs[k] = z
        if kind in (SpaceKind.ODD, SpaceKind.QUARTER_ODD):
            coeffs[-k] = -z
        else:
            coeffs[-k] = z
    return spectra.spectrum(coeffs)
