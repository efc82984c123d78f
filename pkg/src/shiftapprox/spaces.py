"""Orthogonal bases of shift-generated subspaces and projection onto them.

The 2n equidistant translates of a generator B recombine (one inverse DFT)
into functions supported on single frequency residue classes mod 2n; these
are pairwise orthogonal and diagonalize every projection taken here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import spectra
from .kernels import Kernel, class_tail_l2_mass
from .spectra import TruncatedSpectrum

#: Basis elements whose squared norm falls below this are treated as zero.
DEGENERACY_TOL = 1e-20


class DegenerateBasisError(ValueError):
    """Some requested basis element is numerically zero: the shifts are dependent."""


class SpaceKind(Enum):
    """Which span of the residue-class basis functions is meant.

    FULL          all classes l = 1-n .. n (the full space of 2n shifts)
    CROSS         classes l = 1-n .. n-1 (alternating coefficient sum zero)
    CROSS_LOW     classes l = 1-m .. m-1 (the lowest 2m-1 classes)
    ODD           odd parts, l = 1 .. m          (serves odd functions)
    EVEN          class 0 plus even parts, l = 1 .. m-1 (serves even functions)
    QUARTER_ODD   odd parts of odd classes, l = 1, 3, .., 2m-1
    QUARTER_EVEN  even parts of odd classes, l = 1, 3, .., 2m-1
    """

    FULL = "full"
    CROSS = "cross"
    CROSS_LOW = "cross-low"
    ODD = "odd"
    EVEN = "even"
    QUARTER_ODD = "quarter-odd"
    QUARTER_EVEN = "quarter-even"


_M_KINDS = {SpaceKind.CROSS_LOW, SpaceKind.ODD, SpaceKind.EVEN,
            SpaceKind.QUARTER_ODD, SpaceKind.QUARTER_EVEN}


@dataclass(frozen=True)
class ShiftSpaceSpec:
    """A (kernel, n, kind, m) quadruple naming one approximating subspace."""

    kernel: Kernel
    n: int
    kind: SpaceKind
    m: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("shift count n must be >= 1")
        if self.kind in _M_KINDS:
            if self.m is None or self.m < 1:
                raise ValueError(f"{self.kind.value} requires a positive m")
            if self.kind in (SpaceKind.CROSS_LOW, SpaceKind.EVEN) and self.m > self.n:
                raise ValueError("m must not exceed n")
            if self.kind is SpaceKind.ODD and self.m + 1 > self.n:
                raise ValueError("odd variant requires m + 1 <= n")
            if self.kind in (SpaceKind.QUARTER_ODD, SpaceKind.QUARTER_EVEN) \
                    and 2 * self.m + 1 > self.n:
                raise ValueError("quarter variants require 2m + 1 <= n")
        elif self.m is not None:
            raise ValueError(f"{self.kind.value} does not take m")

    def dimension(self) -> int:
        if self.kind is SpaceKind.FULL:
            return 2 * self.n
        if self.kind is SpaceKind.CROSS:
            return 2 * self.n - 1
        if self.kind is SpaceKind.CROSS_LOW:
            return 2 * self.m - 1
        return self.m


@dataclass(frozen=True)
class BasisElement:
    """One orthogonal basis function of a shift space.

    d_norm is the stored part of ||.||^2 / (2 pi); d_norm_upper adds the
    certified bound on the discarded tail mass of its residue class.
    """

    kind: str  # "phi" | "phi_even" | "phi_odd"
    index: int
    spectrum: TruncatedSpectrum
    d_norm: float
    d_norm_upper: float


def _class_frequencies(n: int, l: int, cutoff: int) -> list[int]:
    """All f = l + 2n*j with |f| <= cutoff, ordered by increasing |f|."""
    step = 2 * n
    out = []
    j_lo = -(cutoff + l) // step
    j = j_lo
    while True:
        f = l + step * j
        if f > cutoff:
            break
        if f >= -cutoff:
            out.append(f)
        j += 1
    out.sort(key=lambda f: (abs(f), f))
    return out


def basis_function(kernel: Kernel, n: int, l: int, cutoff: int) -> BasisElement:
    """The recombined translate supported on the residue class l mod 2n.

    Its coefficient at f = l + 2n*j is c_f(B); zero elements are representable
    (admission is checked by basis()).
    """
    if cutoff < 2 * n:
        raise ValueError("cutoff must be at least 2n")
    coeffs: dict[int, complex] = {}
    for f in _class_frequencies(n, l, cutoff):
        c = kernel.coeff(f)
        if c != 0:
            coeffs[f] = c
    stored = math.fsum(abs(c) ** 2 for c in coeffs.values())
    fin = kernel.finite_degree()
    if fin is not None and fin <= cutoff:
        tail_mass = 0.0
        spec = TruncatedSpectrum(coeffs, cutoff, 0.0, None)
    else:
        dec = kernel.class_decay(2 * n, l, cutoff)
        tail_mass = class_tail_l2_mass(dec, cutoff, 2 * n)
        spec = TruncatedSpectrum(coeffs, cutoff, math.sqrt(tail_mass), dec)
    return BasisElement("phi", l, spec, stored, stored + tail_mass)


def gram_diagonal(kernel: Kernel, n: int, l: int, cutoff: int) -> tuple[float, float]:
    """Sum of |c_{l+2nj}|^2 with its certified upper end: [sum, sum + tail mass]."""
    el = basis_function(kernel, n, l, cutoff)
    return el.d_norm, el.d_norm_upper


def _half_element(el: BasisElement, which: str) -> BasisElement:
    part = spectra.even_part if which == "phi_even" else spectra.odd_part
    spec = part(el.spectrum)
    stored = math.fsum(abs(c) ** 2 for c in spec.coeffs.values())
    tail_mass = el.d_norm_upper - el.d_norm  # parts carry at most the full tail
    return BasisElement(which, el.index, spec, stored, stored + tail_mass)


def basis(space: ShiftSpaceSpec, cutoff: int) -> list[BasisElement]:
    """Ordered orthogonal basis of the space; raises on zero elements.

    Ordering is deterministic: increasing |l| with the even part before the
    odd part where both occur.
    """
    kernel, n = space.kernel, space.n
    if space.kind is SpaceKind.FULL:
        labels = sorted(range(1 - n, n + 1), key=lambda l: (abs(l), l))
        elements = [basis_function(kernel, n, l, cutoff) for l in labels]
    elif space.kind is SpaceKind.CROSS:
        labels = sorted(range(1 - n, n), key=lambda l: (abs(l), l))
        elements = [basis_function(kernel, n, l, cutoff) for l in labels]
    elif space.kind is SpaceKind.CROSS_LOW:
        labels = sorted(range(1 - space.m, space.m), key=lambda l: (abs(l), l))
        elements = [basis_function(kernel, n, l, cutoff) for l in labels]
    elif space.kind is SpaceKind.ODD:
        elements = [_half_element(basis_function(kernel, n, l, cutoff), "phi_odd")
                    for l in range(1, space.m + 1)]
    elif space.kind is SpaceKind.EVEN:
        elements = [basis_function(kernel, n, 0, cutoff)]
        elements += [_half_element(basis_function(kernel, n, l, cutoff), "phi_even")
                     for l in range(1, space.m)]
    elif space.kind is SpaceKind.QUARTER_ODD:
        elements = [_half_element(basis_function(kernel, n, 2 * l - 1, cutoff), "phi_odd")
                    for l in range(1, space.m + 1)]
    else:  # QUARTER_EVEN
        elements = [_half_element(basis_function(kernel, n, 2 * l - 1, cutoff), "phi_even")
                    for l in range(1, space.m + 1)]
    for el in elements:
        if el.d_norm < DEGENERACY_TOL:
            raise DegenerateBasisError(
                f"basis element {el.kind}[{el.index}] of {kernel.label()} "
                f"(n={n}) is numerically zero")
    return elements


@dataclass(frozen=True)
class ProjectionResult:
    """Best approximation within the space, with a truncation certificate.

    error_slack bounds how much the squared error may move once the discarded
    tails of the input and of the basis are accounted for.
    """

    approximant: TruncatedSpectrum
    error: float
    error_slack: float


def project(f: TruncatedSpectrum, space: ShiftSpaceSpec, cutoff: int) -> ProjectionResult:
    """Orthogonal projection of f onto the space, via the diagonal Gram matrix."""
    elements = basis(space, cutoff)
    return project_onto(f, elements)


def _pairings(f: TruncatedSpectrum,
              elements: list[BasisElement]) -> tuple[list[complex], float, float]:
    """Inner products against the basis, the squared error, and its certificate.

    The slack bounds how far the squared error can move once the discarded
    tails of f and of each element enter the pairings and the norms; all
    coefficient-unit tail bounds convert to L2 via the 2pi factor.
    """
    norm_f_sq = spectra.norm_sq(f)
    cf = math.sqrt(norm_f_sq / (2.0 * math.pi))  # coefficient-unit norm of f
    f_top = max((abs(k) for k in f.coeffs), default=0)
    ips: list[complex] = []
    captured = []
    slack = 2.0 * math.pi * f.tail_bound**2  # unseen mass of f itself
    for el in elements:
        ip = spectra.inner_product(f, el.spectrum)
        ips.append(ip)
        denom = 2.0 * math.pi * el.d_norm
        captured.append(abs(ip) ** 2 / denom)
        if f.tail_bound == 0.0 and f_top <= el.spectrum.cutoff:
            dip = 0.0  # band-limited input never meets the element's tail
        else:
            ce = math.sqrt(el.d_norm)
            dip = 2.0 * math.pi * (cf * el.spectrum.tail_bound
                                   + f.tail_bound * ce
                                   + f.tail_bound * el.spectrum.tail_bound)
        dmass = max(0.0, el.d_norm_upper - el.d_norm)
        slack += (2.0 * abs(ip) * dip + dip**2) / denom
        slack += (abs(ip) + dip) ** 2 * dmass / (2.0 * math.pi * el.d_norm**2)
    err_sq = norm_f_sq - math.fsum(captured)
    if err_sq < -1e-9 * max(1.0, norm_f_sq):
        raise ArithmeticError(f"projection lost positivity: error^2 = {err_sq}")
    return ips, max(0.0, err_sq), slack


def projection_error_onto(f: TruncatedSpectrum,
                          elements: list[BasisElement]) -> tuple[float, float]:
    """Projection error and its squared-error certificate, skipping the
    approximant assembly (the hot path for randomized suites)."""
    _, err_sq, slack = _pairings(f, elements)
    return math.sqrt(err_sq), slack


def project_onto(f: TruncatedSpectrum, elements: list[BasisElement]) -> ProjectionResult:
    ips, err_sq, slack = _pairings(f, elements)
    coeffs: dict[int, complex] = {}
    cutoff = max([el.spectrum.cutoff for el in elements] + [f.cutoff])
    for el, ip in zip(elements, ips):
        weight = ip / (2.0 * math.pi * el.d_norm)
        for k, c in el.spectrum.coeffs.items():
            coeffs[k] = coeffs.get(k, 0.0) + weight * c
    approx = TruncatedSpectrum(coeffs, cutoff)
    return ProjectionResult(approx, math.sqrt(err_sq), slack)


def projection_error(f: TruncatedSpectrum, space: ShiftSpaceSpec, cutoff: int) -> float:
    return project(f, space, cutoff).error


# ---------------------------------------------------------------------------
# reflection structure

class NoReflection:
    """Sentinel: no single ratio maps the class onto its mirror within tolerance."""

    def __repr__(self) -> str:
        return "NoReflection"


NO_REFLECTION = NoReflection()


def reflection_coefficient(kernel: Kernel, n: int, l: int, cutoff: int,
                           tol: float = 1e-8) -> complex | NoReflection:
    """Least-squares g minimizing sum_k |c_{-l-2nk} - g c_{l+2nk}|^2.

    Returns the ratio when the relative residual is within tol, the sentinel
    when it is not, and 1 when the whole class vanishes (any nonzero ratio
    works then).
    """
    fs = _class_frequencies(n, l, cutoff)
    num = complex(0.0)
    den = 0.0
    mirror_mass = 0.0
    pairs = []
    for f in fs:
        cp = kernel.coeff(f)
        cm = kernel.coeff(-f)
        pairs.append((cp, cm))
        num += cm * cp.conjugate()
        den += abs(cp) ** 2
        mirror_mass += abs(cm) ** 2
    if den == 0.0:
        if mirror_mass == 0.0:
            return 1.0 + 0.0j
        return NO_REFLECTION
    g = num / den
    resid_sq = math.fsum(abs(cm - g * cp) ** 2 for cp, cm in pairs)
    if math.sqrt(resid_sq / den) > tol:
        return NO_REFLECTION
    if g == 0:
        return NO_REFLECTION
    return g
