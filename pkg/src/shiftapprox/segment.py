"""Spline spaces on a segment realized through symmetric periodization.

Boundary-condition families on [0, P]:

  family 0: even derivatives vanish at 0 and pi       (P = pi,   odd extension)
  family 1: odd derivatives vanish at 0 and pi        (P = pi,   even extension)
  family 2: even derivatives vanish at 0, odd at pi/2 (P = pi/2, even reflection
             about pi/2, then odd extension)

Periodizing a family member yields a periodic function whose symmetry class
matches the family, which turns segment approximation by uniform-knot splines
into periodic approximation by symmetric shift spaces.  Splines are carried
spectrally; dimension, boundary, and knot statements are checked numerically.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import spectra
from .kernels import BSpline, Kernel, ShiftedBSpline
from .spaces import ShiftSpaceSpec, SpaceKind, basis
from .spectra import InsufficientDecayError, TruncatedSpectrum

FAMILIES = (0, 1, 2)


class BoundaryViolationError(ValueError):
    """Sampled data breaks the endpoint conditions its family requires."""


class KnotParity(Enum):
    """Whether the uniform knots sit on the integer grid or half a step off it."""

    INTEGER = "integer"
    HALF_SHIFTED = "half-shifted"


def segment_length(family: int) -> float:
    _check_family(family)
    return math.pi / 2 if family == 2 else math.pi


def _check_family(family: int) -> None:
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")


@dataclass(frozen=True)
class KnotVector:
    knots: tuple[float, ...]
    length: float

    def __post_init__(self) -> None:
        prev = 0.0
        for t in self.knots:
            if not (prev < t < self.length):
                raise ValueError("knots must be strictly increasing inside (0, P)")
            prev = t


def uniform_knots(family: int, parity: KnotParity, n: int) -> KnotVector:
    """Interior knots of the periodic uniform grid for either parity choice."""
    _check_family(family)
    if n < 1:
        raise ValueError("n must be >= 1")
    shift_n = {0: n + 1, 1: n, 2: 2 * n + 1}[family]
    h = math.pi / shift_n
    length = segment_length(family)
    if parity is KnotParity.INTEGER:
        points = [k * h for k in range(1, shift_n + 1)]
    else:
        points = [k * h + h / 2 for k in range(0, shift_n + 1)]
    return KnotVector(tuple(t for t in points if 1e-15 < t < length - 1e-15), length)


def matched_parity(family: int, d: int) -> KnotParity:
    """The parity choice under which the spline space dimension equals n."""
    _check_family(family)
    if family in (0, 2):
        return KnotParity.INTEGER if d % 2 == 1 else KnotParity.HALF_SHIFTED
    return KnotParity.HALF_SHIFTED if d % 2 == 1 else KnotParity.INTEGER


def knots_for(family: int, d: int, n: int) -> KnotVector:
    """Knot table entry for the degree: the parity whose dimension count is n.

    Both parity choices remain available for every degree through
    uniform_knots; the mismatched one spans an n-dimensional subspace.
    """
    return uniform_knots(family, matched_parity(family, d), n)


@dataclass(frozen=True)
class SplineSpaceSpec:
    """Degree d, boundary family, dimension parameter n, and knot parity."""

    d: int
    family: int
    n: int
    parity: KnotParity

    def __post_init__(self) -> None:
        _check_family(self.family)
        if self.d < 0:
            raise ValueError("degree must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def shift_count(self) -> int:
        return {0: self.n + 1, 1: self.n, 2: 2 * self.n + 1}[self.family]

    def kernel(self) -> Kernel:
        shift_n = self.shift_count()
        if self.parity is KnotParity.INTEGER:
            return BSpline(shift_n, self.d)
        return ShiftedBSpline(shift_n, self.d)

    def shift_space(self) -> ShiftSpaceSpec:
        kind = {0: SpaceKind.ODD, 1: SpaceKind.EVEN,
                2: SpaceKind.QUARTER_ODD}[self.family]
        return ShiftSpaceSpec(self.kernel(), self.shift_count(), kind, self.n)


def q_space_basis(spec: SplineSpaceSpec, cutoff: int) -> list[TruncatedSpectrum]:
    """Periodic symmetric basis whose segment restrictions span the spline space."""
    return [el.spectrum for el in basis(spec.shift_space(), cutoff)]


# ---------------------------------------------------------------------------
# sampled segment data

@dataclass(frozen=True)
class SampledFunction:
    """Complex samples on a uniform grid covering [0, P] inclusive."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValueError("grid and values must be matching 1-d arrays")
        steps = np.diff(grid)
        if abs(grid[0]) > 1e-12 or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            raise ValueError("grid must be uniform and start at 0")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def grid_step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def length(self) -> float:
        return float(self.grid[-1])


def restrict(spec: TruncatedSpectrum, family: int, num_intervals: int) -> SampledFunction:
    """Pointwise evaluation of a periodic spectrum on the segment grid."""
    grid = np.linspace(0.0, segment_length(family), num_intervals + 1)
    return SampledFunction(grid, spectra.evaluate_grid(spec, grid))


def periodize(u: SampledFunction, family: int, cutoff: int | None = None,
              boundary_tol: float = 1e-9) -> TruncatedSpectrum:
    """Extend a segment sample by the family's reflections and transform.

    The result is the spectrum of the trigonometric interpolant of the
    symmetrized samples, with the class symmetry enforced exactly on the
    coefficients.
    """
    _check_family(family)
    expected = segment_length(family)
    if abs(u.length - expected) > 1e-9:
        raise ValueError(f"family {family} expects samples on [0, {expected:g}]")
    vals = u.values
    scale = max(1.0, float(np.max(np.abs(vals))))
    if family in (0, 2) and abs(vals[0]) > boundary_tol * scale:
        raise BoundaryViolationError(f"|u(0)| = {abs(vals[0]):.3g} must vanish")
    if family == 0 and abs(vals[-1]) > boundary_tol * scale:
        raise BoundaryViolationError(f"|u(pi)| = {abs(vals[-1]):.3g} must vanish")
    if family == 2:
        vals = np.concatenate([vals, vals[-2::-1]])  # even about pi/2, onto [0, pi]
    n_int = vals.size - 1
    sign = 1.0 if family == 1 else -1.0
    # samples of the extension at x_j = -pi + j*h, h = pi/n_int, j = 0..2*n_int-1
    samples = np.concatenate([sign * vals[n_int:0:-1], vals[:n_int]])
    m_tot = samples.size
    fft = np.fft.fft(samples) / m_tot
    max_k = m_tot // 2 - 1
    cutoff = max_k if cutoff is None else min(cutoff, max_k)
    coeffs = {k: (-1) ** k * fft[k % m_tot] for k in range(-cutoff, cutoff + 1)}
    _enforce_symmetry(coeffs, family)
    return TruncatedSpectrum(coeffs, cutoff, 0.0, None)


def _enforce_symmetry(coeffs: dict[int, complex], family: int) -> None:
    for k in sorted({abs(k) for k in coeffs}):
        c, cm = coeffs.get(k, 0.0), coeffs.get(-k, 0.0)
        if family == 1:
            avg = 0.5 * (c + cm)
            coeffs[k] = avg
            coeffs[-k] = avg
        else:
            avg = 0.5 * (c - cm) if k else 0.0
            if family == 2 and k % 2 == 0:
                avg = 0.0
            coeffs[k] = avg
            coeffs[-k] = -avg


# ---------------------------------------------------------------------------
# verification of spline structure

def boundary_orders(family: int, d: int) -> list[tuple[float, int]]:
    """(endpoint, derivative order) pairs checkable below the degree.

    Orders >= d would differentiate the series past its certified decay and
    are rejected by verify_boundary.
    """
    _check_family(family)
    length = segment_length(family)
    pairs: list[tuple[float, int]] = []
    for k in range(0, d):
        if family == 0 and k % 2 == 0:
            pairs += [(0.0, k), (length, k)]
        elif family == 1 and k % 2 == 1:
            pairs += [(0.0, k), (length, k)]
        elif family == 2:
            pairs.append((0.0, k) if k % 2 == 0 else (length, k))
    return pairs


@dataclass(frozen=True)
class BoundaryReport:
    family: int
    d: int
    residuals: tuple[tuple[float, int, float], ...]  # (point, order, |value|)
    tol: float

    @property
    def max_residual(self) -> float:
        return max((r for *_, r in self.residuals), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol


def verify_boundary(spec: TruncatedSpectrum, family: int, d: int,
                    tol: float = 1e-8, max_order: int | None = None) -> BoundaryReport:
    """Evaluate the required endpoint derivatives via the differentiated series."""
    if max_order is not None and max_order >= d:
        raise InsufficientDecayError(
            f"derivative order {max_order} >= degree {d} is not certifiable")
    pairs = boundary_orders(family, d)
    if max_order is not None:
        pairs = [(x, k) for x, k in pairs if k <= max_order]
    residuals = []
    for x, order in pairs:
        ds = spectra.derivative(spec, order) if order else spec
        residuals.append((x, order, abs(spectra.evaluate(ds, x))))
    return BoundaryReport(family, d, tuple(residuals), tol)


def dimension_check(spec: SplineSpaceSpec, cutoff: int,
                    num_points: int | None = None,
                    sv_tol: float = 1e-8) -> int:
    """Numerical rank of the restricted basis on a segment collocation grid."""
    if num_points is None:
        num_points = 4 * (spec.n + spec.d) + 1
    elements = q_space_basis(spec, cutoff)
    grid = np.linspace(0.0, segment_length(spec.family), num_points)
    cols = np.column_stack([spectra.evaluate_grid(el, grid) for el in elements])
    norms = np.linalg.norm(cols, axis=0)
    norms[norms == 0.0] = 1.0
    sing = np.linalg.svd(cols / norms, compute_uv=False)
    return int(np.sum(sing > sv_tol))


@dataclass(frozen=True)
class KnotReport:
    """Where derivative jumps of the restricted basis were found.

    The check is one-directional: every detected jump must sit at an allowed
    knot location, but a space may be smoother than its knot grid permits
    (mismatched parities span proper subspaces; small spaces can even be
    knot-free), so absent jumps are not failures.  Segment endpoints carry
    the periodic grid's own breaks and are excluded.
    """

    expected: tuple[float, ...]
    detected: tuple[float, ...]
    resolution: float
    spurious: int

    @property
    def ok(self) -> bool:
        if self.spurious:
            return False
        return all(
            min((abs(t - e) for e in self.expected), default=math.inf) <= self.resolution
            for t in self.detected)


def detect_knots(spec: SplineSpaceSpec, cutoff: int,
                 cells: int | None = None,
                 signal_ratio: float = 1e-3) -> KnotReport:
    """Locate the derivative-jump positions of the restricted basis.

    Order-(d+1) finite differences of a degree-d piecewise polynomial vanish
    on windows avoiding knots, so lit windows mark them.  The noise floor
    combines the certified evaluation tail with an empirical quantile of the
    off-knot windows.
    """
    length = segment_length(spec.family)
    if cells is None:
        cells = max(256, 24 * (spec.shift_count() + spec.d))
    grid = np.linspace(0.0, length, cells + 1)
    h = grid[1] - grid[0]
    order = spec.d + 1
    knots = uniform_knots(spec.family, spec.parity, spec.n).knots
    elements = q_space_basis(spec, cutoff)
    window = np.zeros(cells + 1 - order)
    for el in elements:
        vals = spectra.evaluate_grid(el, grid)
        window = np.maximum(window, np.abs(np.diff(vals, n=order)))
    peak = float(window.max())
    if peak == 0.0:
        return KnotReport(knots, (), (order + 1) * h, 0)
    # knot windows are a small fraction of the grid, so a high quantile reads
    # the off-knot noise level (truncation tail + rounding); genuine jumps sit
    # orders of magnitude above it, so split the gap geometrically
    noise = 4.0 * float(np.quantile(window, 0.8))
    threshold = max(signal_ratio * peak, math.sqrt(peak * noise), 10.0 * noise)
    hot = window > threshold
    # the truncated series smooths the corners the periodic grid may place at
    # the segment endpoints; those windows say nothing about interior knots
    margin = (order + 1) * h
    allowed = list(knots) + [0.0, length]
    near_allowed = np.array([any(grid[i] - margin <= t <= grid[i + order] + margin
                                 for t in allowed) for i in range(window.size)])
    spurious = int(np.sum(hot & ~near_allowed))
    detected = []
    i = 0
    while i < hot.size:
        if hot[i]:
            j = i
            while j + 1 < hot.size and hot[j + 1]:
                j += 1
            center = grid[i + int(np.argmax(window[i:j + 1]))] + 0.5 * order * h
            if min(center, length - center) > margin:
                detected.append(float(center))
            i = j + 1
        else:
            i += 1
    return KnotReport(knots, tuple(detected), (order + 1) * h, spurious)


# ---------------------------------------------------------------------------
# CSV interchange for sampled data

_COMPLEX_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*"
    r"(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$")


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"


def parse_complex(text: str) -> complex:
    t = text.strip()
    if not t:
        raise ValueError("empty complex value")
    m = _COMPLEX_RE.match(t)
    if m:
        if m.group(2) is None:
            return complex(float(m.group(1)), 0.0)
        imag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), imag if m.group(2) == "+" else -imag)
    if t.endswith(("i", "j")):
        body = t[:-1]
        if body in ("", "+", "-"):
            body += "1"
        return complex(0.0, float(body))
    raise ValueError(f"cannot parse complex value {text!r}")


def write_sampled_csv(u: SampledFunction, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "value"])
        for x, v in zip(u.grid, u.values):
            writer.writerow([f"{x:.17g}", format_complex(complex(v))])


def read_sampled_csv(path: str) -> SampledFunction:
    xs: list[float] = []
    vs: list[complex] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["x", "value"]:
            raise ValueError("sampled CSV must start with an 'x,value' header")
        for row in reader:
            if not row:
                continue
            xs.append(float(row[0]))
            vs.append(parse_complex(row[1]))
    return SampledFunction(np.array(xs), np.array(vs))
