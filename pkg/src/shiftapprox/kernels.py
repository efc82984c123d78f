"""Closed-form Fourier coefficients for the generator families.

Every generator is described by an exact coefficient rule c_k plus enough
analytic metadata (decay envelopes, exact zero patterns, exact reflection
ratios) for downstream certificates to bound what truncation discards.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .spectra import DecayBound, TruncatedSpectrum, power_tail_l2

# ---------------------------------------------------------------------------
# weight sequences (multipliers eta_k applied on top of the B-spline factor)

@dataclass(frozen=True)
class Poisson:
    """eta_k = exp(-alpha |k|), alpha > 0."""

    alpha: float

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("Poisson weight needs alpha > 0")

    def value(self, k: int) -> complex:
        return complex(math.exp(-self.alpha * abs(k)))

    def envelope(self, cutoff: int) -> float:
        return math.exp(-self.alpha * (cutoff + 1))

    def reflection_ratio(self) -> complex | None:
        return 1.0 + 0.0j

    def label(self) -> str:
        return f"poisson(alpha={self.alpha:g})"


@dataclass(frozen=True)
class Heat:
    """eta_k = exp(-alpha k^2), alpha > 0."""

    alpha: float

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("heat weight needs alpha > 0")

    def value(self, k: int) -> complex:
        return complex(math.exp(-self.alpha * k * k))

    def envelope(self, cutoff: int) -> float:
        return math.exp(-self.alpha * (cutoff + 1) ** 2)

    def reflection_ratio(self) -> complex | None:
        return 1.0 + 0.0j

    def label(self) -> str:
        return f"heat(alpha={self.alpha:g})"


@dataclass(frozen=True)
class DiffOperator:
    """eta_k = 1/P(ik) for a real-rooted polynomial P, with eta_0 = 1."""

    roots: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", tuple(float(r) for r in self.roots))

    def value(self, k: int) -> complex:
        if k == 0:
            return 1.0 + 0.0j
        p = complex(1.0)
        for rho in self.roots:
            p *= 1j * k - rho
        if p == 0:
            raise ZeroDivisionError(f"polynomial vanishes at ik for k={k}")
        return 1.0 / p

    def envelope(self, cutoff: int) -> float:
        # |ik - rho| = sqrt(k^2 + rho^2) is increasing in |k|
        return abs(self.value(cutoff + 1))

    def reflection_ratio(self) -> complex | None:
        # P(-ik) = conj(P(ik)); with a symmetric root multiset P(ik) is real
        # times (ik)^z, so the ratio is 1 for even zero-root counts and -1
        # for odd ones; asymmetric multisets give no constant ratio.
        if sorted(self.roots) != sorted(-r for r in self.roots):
            return None
        if sum(1 for r in self.roots if r == 0.0) % 2 == 1:
            return -1.0 + 0.0j
        return 1.0 + 0.0j

    def label(self) -> str:
        return f"diff-operator(roots={list(self.roots)})"


@dataclass(frozen=True)
class GeneralizedBernoulli:
    """eta_k = |k|^(-s) exp(-i beta sign k), s > 0, with eta_0 = 1."""

    s: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.s <= 0:
            raise ValueError("generalized Bernoulli weight needs s > 0")

    def value(self, k: int) -> complex:
        if k == 0:
            return 1.0 + 0.0j
        sign = 1 if k > 0 else -1
        return abs(k) ** (-self.s) * cmath.exp(-1j * self.beta * sign)

    def envelope(self, cutoff: int) -> float:
        return (cutoff + 1) ** (-self.s)

    def reflection_ratio(self) -> complex | None:
        # sign(k) flips within a residue class, so the phase breaks the
        # reflection identity unless it is absent.
        return 1.0 + 0.0j if self.beta == 0.0 else None

    def label(self) -> str:
        return f"bernoulli(s={self.s:g},beta={self.beta:g})"


WeightSeq = Poisson | Heat | DiffOperator | GeneralizedBernoulli


def weight_value(w: WeightSeq, k: int) -> complex:
    return w.value(k)


def weight_monotone_defect(w: WeightSeq, n: int, K: int) -> float:
    """Largest violation of |eta_{l+2nk}| <= |eta_l| for |l| < n up to K."""
    worst = 0.0
    for l in range(1 - n, n):
        base = abs(w.value(l))
        f = l
        while True:
            f += 2 * n
            if f > K:
                break
            worst = max(worst, abs(w.value(f)) - base)
        f = l
        while True:
            f -= 2 * n
            if f < -K:
                break
            worst = max(worst, abs(w.value(f)) - base)
    return worst


# ---------------------------------------------------------------------------
# generator kernels

def _bspline_factor(n: int, k: int) -> complex:
    """(exp(i pi k/n) - 1)/(i pi k/n), equal to 1 at k = 0.

    The numerator vanishes identically at nonzero multiples of 2n; returning
    the exact zero keeps the residue-class structure sparse instead of
    leaving rounding dust.
    """
    if k == 0:
        return 1.0 + 0.0j
    if k % (2 * n) == 0:
        return 0.0 + 0.0j
    return (cmath.exp(1j * math.pi * k / n) - 1.0) / (1j * math.pi * k / n)


class Kernel:
    """Common surface of every generator family.

    Subclasses provide the exact coefficient rule and whatever analytic
    metadata the closed form supports; absent metadata degrades certificates
    to envelope bounds, never to unsound ones.
    """

    def coeff(self, k: int) -> complex:
        raise NotImplementedError

    def decay(self) -> DecayBound | None:
        """Global envelope |c_k| <= C |k|^-p valid for every k != 0, or None."""
        return None

    def finite_degree(self) -> int | None:
        """Largest |k| with c_k != 0, when the spectrum is finite."""
        return None

    def zero_residue_step(self) -> int | None:
        """Step M such that c_k = 0 exactly for every k != 0 with k % M == 0."""
        return None

    def class_decay(self, step: int, l: int, cutoff: int) -> DecayBound | None:
        """Envelope valid on the residue class {l + step*j} beyond the cutoff."""
        return self.decay()

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        """Closed-form ratio g with c_{-l-2nk} = g * c_{l+2nk} for all k, if known."""
        return None

    def natural_shift_count(self) -> int | None:
        """The shift-space parameter n the family was built around, if any."""
        return None

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Dirichlet(Kernel):
    """Kernel with c_k = 1 for |k| <= degree and 0 beyond (finite spectrum)."""

    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("Dirichlet degree must be nonnegative")

    def coeff(self, k: int) -> complex:
        return 1.0 + 0.0j if abs(k) <= self.degree else 0.0 + 0.0j

    def finite_degree(self) -> int | None:
        return self.degree

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        return 1.0 + 0.0j  # even kernel

    def natural_shift_count(self) -> int | None:
        return self.degree + 1

    def label(self) -> str:
        return f"dirichlet(deg={self.degree})"


@dataclass(frozen=True)
class BSpline(Kernel):
    """Periodic B-spline of degree mu with knots at multiples of pi/n.

    c_k = ((exp(i pi k/n) - 1)/(i pi k/n))^(mu+1), with the fraction read as
    1 at k = 0.  |c_k| <= (2n/(pi |k|))^(mu+1).
    """

    n: int
    mu: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("B-spline needs n >= 1")
        if self.mu < 0:
            raise ValueError("B-spline degree mu must be nonnegative")

    def coeff(self, k: int) -> complex:
        return _bspline_factor(self.n, k) ** (self.mu + 1)

    def decay(self) -> DecayBound | None:
        return DecayBound((2.0 * self.n / math.pi) ** (self.mu + 1), self.mu + 1.0)

    def zero_residue_step(self) -> int | None:
        return 2 * self.n

    def class_decay(self, step: int, l: int, cutoff: int) -> DecayBound | None:
        # |sin(pi k/(2n))| is constant along classes mod step when 2n | step.
        if step % (2 * self.n) == 0:
            amp = abs(2.0 * self.n / math.pi * math.sin(math.pi * l / (2.0 * self.n)))
            return DecayBound(amp ** (self.mu + 1), self.mu + 1.0)
        return self.decay()

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        if n == self.n:
            return cmath.exp(-1j * math.pi * l * (self.mu + 1) / self.n)
        return None

    def natural_shift_count(self) -> int | None:
        return self.n

    def label(self) -> str:
        return f"bspline(n={self.n},mu={self.mu})"


@dataclass(frozen=True)
class ShiftedBSpline(Kernel):
    """B-spline translated by half a knot step: c_k = exp(-ik pi/(2n)) * c_k(B)."""

    n: int
    mu: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("shifted B-spline needs n >= 1")
        if self.mu < 0:
            raise ValueError("shifted B-spline degree mu must be nonnegative")

    def _base(self) -> BSpline:
        return BSpline(self.n, self.mu)

    def coeff(self, k: int) -> complex:
        return cmath.exp(-1j * k * math.pi / (2 * self.n)) * self._base().coeff(k)

    def decay(self) -> DecayBound | None:
        return self._base().decay()

    def zero_residue_step(self) -> int | None:
        return 2 * self.n

    def class_decay(self, step: int, l: int, cutoff: int) -> DecayBound | None:
        return self._base().class_decay(step, l, cutoff)

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        if n == self.n:
            return cmath.exp(-1j * l * math.pi * self.mu / self.n)
        return None

    def natural_shift_count(self) -> int | None:
        return self.n

    def label(self) -> str:
        return f"shifted-bspline(n={self.n},mu={self.mu})"


@dataclass(frozen=True)
class Weighted(Kernel):
    """B-spline coefficients multiplied by a weight sequence eta_k."""

    n: int
    mu: int
    weight: WeightSeq

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("weighted kernel needs n >= 1")
        if self.mu < 0:
            raise ValueError("weighted kernel degree mu must be nonnegative")

    def _base(self) -> BSpline:
        return BSpline(self.n, self.mu)

    def coeff(self, k: int) -> complex:
        return self._base().coeff(k) * self.weight.value(k)

    def decay(self) -> DecayBound | None:
        base = self._base().decay()
        # every supported weight satisfies |eta_k| <= 1 for k != 0
        return DecayBound(base.amplitude, base.exponent)

    def zero_residue_step(self) -> int | None:
        return 2 * self.n

    def class_decay(self, step: int, l: int, cutoff: int) -> DecayBound | None:
        base = self._base().class_decay(step, l, cutoff)
        env = self.weight.envelope(cutoff)
        return DecayBound(base.amplitude * env, base.exponent)

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        gb = self._base().reflection_ratio_exact(n, l)
        gw = self.weight.reflection_ratio()
        if gb is None or gw is None:
            return None
        return gb * gw

    def natural_shift_count(self) -> int | None:
        return self.n

    def label(self) -> str:
        return f"weighted(n={self.n},mu={self.mu},{self.weight.label()})"


@dataclass(frozen=True)
class CustomKernel(Kernel):
    """Generator given by an arbitrary coefficient rule plus a decay envelope.

    The envelope is mandatory for truncation certificates; the optional
    metadata fields let a caller pass through structure the rule is known to
    have (the checks fall back to envelope bounds without them).
    """

    rule: Callable[[int], complex]
    decay_envelope: DecayBound
    name: str = "custom"
    zero_step: int | None = None
    finite: int | None = None
    shift_count: int | None = None
    reflection_rule: Callable[[int, int], complex | None] | None = None

    def coeff(self, k: int) -> complex:
        return complex(self.rule(k))

    def decay(self) -> DecayBound | None:
        return self.decay_envelope

    def finite_degree(self) -> int | None:
        return self.finite

    def zero_residue_step(self) -> int | None:
        return self.zero_step

    def reflection_ratio_exact(self, n: int, l: int) -> complex | None:
        if self.reflection_rule is None:
            return None
        return self.reflection_rule(n, l)

    def natural_shift_count(self) -> int | None:
        return self.shift_count

    def label(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# truncation

def truncate(kernel: Kernel, cutoff: int) -> TruncatedSpectrum:
    """Materialize c_k for |k| <= cutoff with a certified L2 tail bound."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    if isinstance(kernel, CustomKernel) and kernel.decay_envelope is None:
        raise ValueError("custom kernels need a decay envelope to truncate")
    coeffs = {k: kernel.coeff(k) for k in range(-cutoff, cutoff + 1)}
    fin = kernel.finite_degree()
    if fin is not None and fin <= cutoff:
        return TruncatedSpectrum(coeffs, cutoff, 0.0, None)
    dec = kernel.decay()
    if dec is None:
        raise ValueError(f"{kernel.label()} carries no decay metadata")
    if dec.exponent <= 0.5:
        raise ValueError(f"{kernel.label()} decays too slowly to certify a tail")
    tail = power_tail_l2(dec.amplitude, dec.exponent, cutoff)
    return TruncatedSpectrum(coeffs, cutoff, tail, dec)


def class_tail_l2_mass(dec: DecayBound, cutoff: int, step: int) -> float:
    """Bound on sum of |c_f|^2 over the frequencies of one residue class
    (both signs) with |f| > cutoff, under the class envelope."""
    if dec.amplitude == 0.0:
        return 0.0
    if dec.exponent <= 0.5:
        return math.inf
    p2 = 2.0 * dec.exponent
    # first class element beyond the cutoff, then integral comparison for the
    # rest of the arithmetic progression; both signs
    single = (cutoff + 1.0) ** (-p2) + cutoff ** (1.0 - p2) / ((p2 - 1.0) * step)
    return 2.0 * dec.amplitude**2 * single


def class_tail_sup(dec: DecayBound, cutoff: int, growth: float) -> float:
    """Bound on sup |f|^growth |c_f| over class frequencies beyond the cutoff."""
    if dec.amplitude == 0.0:
        return 0.0
    if growth > dec.exponent:
        return math.inf
    return dec.amplitude * (cutoff + 1.0) ** (growth - dec.exponent)


# ---------------------------------------------------------------------------
# catalog (drives the CLI and the docs)

def catalog() -> list[dict[str, str]]:
    """Enumerate the built-in generator families with their parameter schemas."""
    return [
        {"kernel": "dirichlet", "parameters": "deg (int >= 0)",
         "coefficients": "1 for |k| <= deg, 0 beyond",
         "notes": "finite spectrum; even"},
        {"kernel": "bspline", "parameters": "n (int >= 1), mu (int >= 0)",
         "coefficients": "((exp(i pi k/n)-1)/(i pi k/n))^(mu+1)",
         "notes": "periodic spline of degree mu, knots at j*pi/n"},
        {"kernel": "shifted-bspline", "parameters": "n (int >= 1), mu (int >= 0)",
         "coefficients": "exp(-ik pi/(2n)) times the bspline value",
         "notes": "knots at half-integer grid positions"},
        {"kernel": "weighted", "parameters": "n, mu, family + family parameters",
         "coefficients": "bspline value times eta_k",
         "notes": "families: poisson(alpha), heat(alpha), "
                  "diff-operator(roots), bernoulli(s, beta)"},
        {"kernel": "custom", "parameters": "coefficient table + decay (C, p)",
         "coefficients": "arbitrary rule under a certified envelope |c_k| <= C|k|^-p",
         "notes": "config-file only; p > 1/2 required"},
    ]
