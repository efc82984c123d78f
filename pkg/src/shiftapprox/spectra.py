"""Sparse truncated Fourier spectra and the arithmetic built on them.

A 2pi-periodic function is represented by the complex coefficients c_k of
its Fourier series on the stored frequencies |k| <= cutoff, together with a
certified bound on the L2 mass of everything that was discarded.  All
operations are pure; instances are immutable and safe to share between
workers.

Conventions: c_k(f) = (1/2pi) * integral of f(t) exp(-ikt) over a period,
so that <f, g> = 2pi * sum_k c_k(f) * conj(c_k(g)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

#: Default relative tolerance for coefficientwise comparisons.
DEFAULT_REL_TOL = 1e-12
#: Default absolute tolerance for coefficientwise comparisons.
DEFAULT_ABS_TOL = 1e-14


class InsufficientDecayError(ValueError):
    """Raised when an operation needs faster coefficient decay than certified."""


@dataclass(frozen=True)
class DecayBound:
    """Certified envelope |c_k| <= amplitude * |k|**(-exponent) beyond the cutoff."""

    amplitude: float
    exponent: float

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ValueError("decay amplitude must be nonnegative")


def power_tail_l2(amplitude: float, exponent: float, cutoff: int) -> float:
    """Bound on the L2 mass sqrt(sum_{|k|>cutoff} |c_k|^2) under a power envelope.

    The integral comparison for a decreasing envelope already over-covers the
    sum, so this is sound as is: sum_{k>K} k^(-2p) <= K^(1-2p)/(2p-1).
    """
    if amplitude == 0.0:
        return 0.0
    if exponent <= 0.5:
        return math.inf
    mass = 2.0 * amplitude**2 * cutoff ** (1.0 - 2.0 * exponent) / (2.0 * exponent - 1.0)
    return math.sqrt(mass)


def power_tail_pointwise(amplitude: float, exponent: float, cutoff: int) -> float:
    """Bound on sum_{|k|>cutoff} |c_k| under a power envelope (inf if divergent)."""
    if amplitude == 0.0:
        return 0.0
    if exponent <= 1.0:
        return math.inf
    return 2.0 * amplitude * cutoff ** (1.0 - exponent) / (exponent - 1.0)


@dataclass(frozen=True)
class TruncatedSpectrum:
    """Finite frequency -> coefficient map with a certified tail bound.

    tail_bound bounds the L2 mass (in coefficient units, i.e. sqrt of the sum
    of squared moduli) of the discarded frequencies.  Exactly representable
    objects (trigonometric polynomials) carry tail_bound 0.  decay, when
    present, certifies a pointwise envelope beyond the cutoff and is what
    allows differentiation of truncated objects.
    """

    coeffs: Mapping[int, complex]
    cutoff: int
    tail_bound: float = 0.0
    decay: DecayBound | None = None

    def __post_init__(self) -> None:
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")
        cleaned = {}
        for k, c in self.coeffs.items():
            if abs(k) > self.cutoff:
                raise ValueError(f"stored frequency {k} exceeds cutoff {self.cutoff}")
            z = complex(c)
            if z != 0:
                cleaned[int(k)] = z
        object.__setattr__(self, "coeffs", MappingProxyType(cleaned))

    def coeff(self, k: int) -> complex:
        return self.coeffs.get(k, 0.0 + 0.0j)

    def frequencies(self) -> list[int]:
        return sorted(self.coeffs.keys())

    @property
    def is_exact(self) -> bool:
        return self.tail_bound == 0.0

    def __repr__(self) -> str:  # compact, large spectra are unreadable otherwise
        return (
            f"TruncatedSpectrum({len(self.coeffs)} coeffs, cutoff={self.cutoff}, "
            f"tail_bound={self.tail_bound:g})"
        )


def spectrum(coeffs: Mapping[int, complex], cutoff: int | None = None,
             tail_bound: float = 0.0, decay: DecayBound | None = None) -> TruncatedSpectrum:
    """Build a spectrum, inferring the cutoff from the support when omitted."""
    if cutoff is None:
        cutoff = max((abs(k) for k in coeffs), default=0)
    return TruncatedSpectrum(dict(coeffs), cutoff, tail_bound, decay)


def zero_spectrum(cutoff: int = 0) -> TruncatedSpectrum:
    return TruncatedSpectrum({}, cutoff)


def sin_spectrum(k: int) -> TruncatedSpectrum:
    """Spectrum of sin(kx)."""
    if k == 0:
        return zero_spectrum()
    return spectrum({k: -0.5j, -k: 0.5j})


def cos_spectrum(k: int) -> TruncatedSpectrum:
    """Spectrum of cos(kx)."""
    if k == 0:
        return spectrum({0: 1.0 + 0.0j})
    return spectrum({k: 0.5 + 0.0j, -k: 0.5 + 0.0j})


def constant_spectrum(value: complex = 1.0) -> TruncatedSpectrum:
    return spectrum({0: complex(value)})


# ---------------------------------------------------------------------------
# linear arithmetic

def _merged_decay(a: TruncatedSpectrum, b: TruncatedSpectrum) -> DecayBound | None:
    if a.tail_bound == 0.0 and b.tail_bound == 0.0:
        return None
    if a.decay is None or b.decay is None:
        return None
    p = min(a.decay.exponent, b.decay.exponent)
    return DecayBound(a.decay.amplitude + b.decay.amplitude, p)


def add(a: TruncatedSpectrum, b: TruncatedSpectrum) -> TruncatedSpectrum:
    out: dict[int, complex] = dict(a.coeffs)
    for k, c in b.coeffs.items():
        out[k] = out.get(k, 0.0) + c
    return TruncatedSpectrum(out, max(a.cutoff, b.cutoff),
                             a.tail_bound + b.tail_bound, _merged_decay(a, b))


def subtract(a: TruncatedSpectrum, b: TruncatedSpectrum) -> TruncatedSpectrum:
    return add(a, scale(b, -1.0))


def scale(a: TruncatedSpectrum, z: complex) -> TruncatedSpectrum:
    z = complex(z)
    dec = None
    if a.decay is not None:
        dec = DecayBound(a.decay.amplitude * abs(z), a.decay.exponent)
    return TruncatedSpectrum({k: z * c for k, c in a.coeffs.items()},
                             a.cutoff, abs(z) * a.tail_bound, dec)


# ---------------------------------------------------------------------------
# inner products and norms

def inner_product(a: TruncatedSpectrum, b: TruncatedSpectrum) -> complex:
    """L2 pairing 2pi * sum_k a_k conj(b_k) over the shared stored frequencies."""
    small, large = (a, b) if len(a.coeffs) <= len(b.coeffs) else (b, a)
    acc_re: list[float] = []
    acc_im: list[float] = []
    for k, c in small.coeffs.items():
        other = large.coeffs.get(k)
        if other is None:
            continue
        term = (c * other.conjugate()) if small is a else (other * c.conjugate())
        acc_re.append(term.real)
        acc_im.append(term.imag)
    return 2.0 * math.pi * complex(math.fsum(acc_re), math.fsum(acc_im))


def norm_sq(a: TruncatedSpectrum) -> float:
    """Stored part of ||a||_2^2 = 2pi * sum |a_k|^2."""
    return 2.0 * math.pi * math.fsum(abs(c) ** 2 for c in a.coeffs.values())


def l2_norm(a: TruncatedSpectrum) -> float:
    return math.sqrt(norm_sq(a))


def l2_norm_interval(a: TruncatedSpectrum) -> tuple[float, float]:
    """Certified two-sided bracket on the true L2 norm.

    The discarded frequencies add at most 2pi * tail_bound^2 to the squared
    norm and nothing below the stored part.
    """
    lo = l2_norm(a)
    hi = math.sqrt(norm_sq(a) + 2.0 * math.pi * a.tail_bound**2)
    return lo, hi


# ---------------------------------------------------------------------------
# structural operations

def derivative(a: TruncatedSpectrum, r: int) -> TruncatedSpectrum:
    """r-th derivative: coefficient at k becomes (ik)^r * a_k.

    A truncated object can only be differentiated when its tail decay is
    certified fast enough to control the differentiated tail.
    """
    if r < 0:
        raise ValueError("derivative order must be nonnegative")
    if r == 0:
        return a
    coeffs = {k: (1j * k) ** r * c for k, c in a.coeffs.items()}
    if a.tail_bound == 0.0:
        return TruncatedSpectrum(coeffs, a.cutoff, 0.0, None)
    if a.decay is None:
        raise InsufficientDecayError(
            "cannot differentiate a truncated spectrum without decay metadata")
    p = a.decay.exponent - r
    if p <= 0.5:
        raise InsufficientDecayError(
            f"decay exponent {a.decay.exponent} too small for derivative order {r}")
    new_tail = power_tail_l2(a.decay.amplitude, p, a.cutoff)
    return TruncatedSpectrum(coeffs, a.cutoff, new_tail,
                             DecayBound(a.decay.amplitude, p))


def even_part(a: TruncatedSpectrum) -> TruncatedSpectrum:
    """Coefficients (a_k + a_{-k})/2; the even part of the function."""
    out: dict[int, complex] = {}
    for k, c in a.coeffs.items():
        out[k] = out.get(k, 0.0) + 0.5 * c
        out[-k] = out.get(-k, 0.0) + 0.5 * c
    return TruncatedSpectrum(out, a.cutoff, a.tail_bound, a.decay)


def odd_part(a: TruncatedSpectrum) -> TruncatedSpectrum:
    """Coefficients (a_k - a_{-k})/2; the odd part of the function."""
    out: dict[int, complex] = {}
    for k, c in a.coeffs.items():
        out[k] = out.get(k, 0.0) + 0.5 * c
        out[-k] = out.get(-k, 0.0) - 0.5 * c
    return TruncatedSpectrum(out, a.cutoff, a.tail_bound, a.decay)


def reflect(a: TruncatedSpectrum) -> TruncatedSpectrum:
    """Spectrum of x -> a(-x): coefficient at k becomes a_{-k}."""
    return TruncatedSpectrum({-k: c for k, c in a.coeffs.items()},
                             a.cutoff, a.tail_bound, a.decay)


def shift(a: TruncatedSpectrum, h: float) -> TruncatedSpectrum:
    """Spectrum of x -> a(x - h): coefficient at k multiplied by exp(-ikh)."""
    return TruncatedSpectrum({k: c * cmath.exp(-1j * k * h) for k, c in a.coeffs.items()},
                             a.cutoff, a.tail_bound, a.decay)


# ---------------------------------------------------------------------------
# evaluation

def evaluate(a: TruncatedSpectrum, x: float) -> complex:
    """Pointwise synthesis sum_k a_k exp(ikx) over the stored frequencies."""
    return complex(math.fsum(( c * cmath.exp(1j * k * x)).real for k, c in a.coeffs.items()),
                   math.fsum((c * cmath.exp(1j * k * x)).imag for k, c in a.coeffs.items()))


def evaluate_with_error(a: TruncatedSpectrum, x: float) -> tuple[complex, float]:
    """Pointwise value plus a certified bound on the discarded-tail contribution."""
    value = evaluate(a, x)
    if a.tail_bound == 0.0:
        return value, 0.0
    if a.decay is None:
        return value, math.inf
    return value, power_tail_pointwise(a.decay.amplitude, a.decay.exponent, a.cutoff)


def evaluate_grid(a: TruncatedSpectrum, xs: np.ndarray) -> np.ndarray:
    """Vectorized synthesis on an array of points."""
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape, dtype=complex)
    if not a.coeffs:
        return out
    freqs = np.fromiter(a.coeffs.keys(), dtype=float, count=len(a.coeffs))
    vals = np.fromiter(a.coeffs.values(), dtype=complex, count=len(a.coeffs))
    # chunk over frequencies to keep the outer product bounded in memory
    step = max(1, 8_000_000 // max(1, xs.size))
    for i in range(0, freqs.size, step):
        out += np.exp(1j * np.outer(xs, freqs[i:i + step])) @ vals[i:i + step]
    return out


# ---------------------------------------------------------------------------
# symmetry classes

class SymmetryClass(Enum):
    """Parity structure of a periodic function, stated on coefficients.

    ODD:          c_{-k} = -c_k (vanishing mean).
    EVEN:         c_{-k} = c_k.
    QUARTER_ODD:  odd, and even about pi/2 after the quarter-period shift;
                  equivalently odd with only odd harmonics.
    """

    ODD = "odd"
    EVEN = "even"
    QUARTER_ODD = "quarter-odd"


@dataclass(frozen=True)
class SmoothnessClass:
    """A symmetry class together with the derivative order of the unit ball."""

    symmetry: SymmetryClass
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("smoothness order must be >= 1")


def symmetry_defect(a: TruncatedSpectrum, sym: SymmetryClass) -> float:
    """Largest coefficientwise violation of the class symmetry (0 = exact member)."""
    worst = 0.0
    keys = set(a.coeffs) | {-k for k in a.coeffs}
    for k in keys:
        c, cm = a.coeff(k), a.coeff(-k)
        if sym is SymmetryClass.ODD:
            worst = max(worst, abs(cm + c))
        elif sym is SymmetryClass.EVEN:
            worst = max(worst, abs(cm - c))
        else:
            worst = max(worst, abs(cm + c))
            if k % 2 == 0:
                worst = max(worst, abs(c))
    return worst


def spectra_close(a: TruncatedSpectrum, b: TruncatedSpectrum,
                  rel_tol: float = DEFAULT_REL_TOL,
                  abs_tol: float = DEFAULT_ABS_TOL) -> bool:
    """Coefficientwise comparison with the package-default tolerances."""
    scale_ = max([abs(c) for c in a.coeffs.values()]
                 + [abs(c) for c in b.coeffs.values()] + [0.0])
    tol = max(abs_tol, rel_tol * scale_)
    for k in set(a.coeffs) | set(b.coeffs):
        if abs(a.coeff(k) - b.coeff(k)) > tol:
            return False
    return True


def from_rule(rule: Callable[[int], complex], cutoff: int,
              tail_bound: float = 0.0, decay: DecayBound | None = None) -> TruncatedSpectrum:
    """Materialize c_k = rule(k) for |k| <= cutoff."""
    return TruncatedSpectrum({k: rule(k) for k in range(-cutoff, cutoff + 1)},
                             cutoff, tail_bound, decay)
