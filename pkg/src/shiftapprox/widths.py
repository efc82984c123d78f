"""Independent numerical oracles for the approximation bounds.

worst_case_ratio maximizes the squared projection-error to derivative-norm
ratio over a truncated symmetry class with a matrix-free power iteration;
ellipsoid_width reads the class widths off the sorted semiaxes; and
brute_force_projection solves the full normal equations without assuming
orthogonality, as an independent cross-check of the diagonal projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectra
from .spaces import ShiftSpaceSpec, SpaceKind, basis
from .spectra import SmoothnessClass, SymmetryClass, TruncatedSpectrum

POWER_SEED = 0x5EED
_RESTARTS = 3


class NonConvergenceError(RuntimeError):
    """Power iteration failed to settle within the iteration cap."""


class IllConditionedError(ValueError):
    """The Gram matrix of the supplied raw basis is numerically singular."""


class TruncationTooSmallError(ValueError):
    """The requested width index lies beyond the truncated semiaxis list."""


class ConstantNotAbsorbedError(ValueError):
    """The even-class ratio is unbounded: the space misses the constants."""


@dataclass(frozen=True)
class RatioProblem:
    """Worst-case squared-error ratio over a truncated symmetry class.

    symmetry None means the full complex class (every harmonic); zero_mean
    excludes the constant coordinate from the class.
    """

    space: ShiftSpaceSpec
    r: int
    symmetry: SymmetryClass | None
    cutoff: int
    zero_mean: bool = False

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("smoothness order must be >= 1")
        if self.cutoff < 4 * self.space.n:
            raise ValueError("cutoff must be at least 4n")


def _coordinates(symmetry: SymmetryClass | None, cutoff: int,
                 zero_mean: bool) -> tuple[np.ndarray, bool]:
    """Harmonic index list of the class and whether a constant slot exists."""
    if symmetry is SymmetryClass.ODD:
        return np.arange(1, cutoff + 1), False
    if symmetry is SymmetryClass.EVEN:
        ks = np.arange(0 if not zero_mean else 1, cutoff + 1)
        return ks, not zero_mean
    if symmetry is SymmetryClass.QUARTER_ODD:
        return np.arange(1, cutoff + 1, 2), False
    ks = np.concatenate([np.arange(-cutoff, 0), np.arange(0 if not zero_mean else 1,
                                                          cutoff + 1)])
    return ks, not zero_mean


def _element_coordinates(spec: TruncatedSpectrum, symmetry: SymmetryClass | None,
                         ks: np.ndarray) -> np.ndarray:
    """Coordinates of a spectrum in the orthonormal class basis.

    Class bases: sin(kx)/sqrt(pi) for the odd classes, cos(kx)/sqrt(pi) plus
    1/sqrt(2pi) for the even class, exp(ikx)/sqrt(2pi) for the full class.
    """
    q = np.zeros(ks.shape, dtype=complex)
    pos = {int(k): i for i, k in enumerate(ks)}
    if symmetry in (SymmetryClass.ODD, SymmetryClass.QUARTER_ODD):
        for k, i in pos.items():
            q[i] = 1j * math.sqrt(math.pi) * (spec.coeff(k) - spec.coeff(-k))
    elif symmetry is SymmetryClass.EVEN:
        for k, i in pos.items():
            if k == 0:
                q[i] = math.sqrt(2.0 * math.pi) * spec.coeff(0)
            else:
                q[i] = math.sqrt(math.pi) * (spec.coeff(k) + spec.coeff(-k))
    else:
        for k, i in pos.items():
            q[i] = math.sqrt(2.0 * math.pi) * spec.coeff(k)
    return q


def _power_iteration(apply_op, dim: int, rel_tol: float = 1e-12,
                     max_iter: int = 200_000) -> float:
    rng = np.random.default_rng(POWER_SEED)
    best = 0.0
    converged = False
    for _ in range(_RESTARTS):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        lam_old = -1.0
        for _ in range(max_iter):
            u = apply_op(v)
            lam = float(np.vdot(v, u).real)
            nu = float(np.linalg.norm(u))
            if nu == 0.0:
                lam = 0.0
                converged = True
                break
            v = u / nu
            if abs(lam - lam_old) <= rel_tol * max(abs(lam), 1e-300):
                converged = True
                break
            lam_old = lam
        best = max(best, lam)
    if not converged:
        raise NonConvergenceError("power iteration did not converge")
    return best


def worst_case_ratio(problem: RatioProblem) -> float:
    """Largest value of error(u, space)^2 / ||u^(r)||^2 over the class.

    The operator is D^(-1/2) (I - sum_j q_j q_j* / ||phi_j||^2) D^(-1/2) with
    D the diagonal derivative weight k^(2r) on the class coordinates; its top
    eigenvalue is found by restarted power iteration.  The result is a lower
    bound on the untruncated supremum; see worst_case_ratio_gap.
    """
    ks, has_constant = _coordinates(problem.symmetry, problem.cutoff,
                                    problem.zero_mean)
    elements = basis(problem.space, problem.cutoff)
    if has_constant:
        # a zero-derivative direction makes the ratio unbounded unless the
        # space absorbs it; verify absorption, then optimize the complement
        const = spectra.constant_spectrum(1.0)
        from .spaces import project_onto
        if project_onto(const, elements).error > 1e-10 * math.sqrt(2.0 * math.pi):
            raise ConstantNotAbsorbedError(
                f"{problem.space.kernel.label()} space does not contain constants")
        keep = ks != 0
        ks = ks[keep]
    qs = np.array([_element_coordinates(el.spectrum, problem.symmetry, ks)
                   for el in elements])
    norms = np.array([2.0 * math.pi * el.d_norm for el in elements])
    inv_sqrt_w = np.abs(ks).astype(float) ** (-float(problem.r))

    def apply_op(v: np.ndarray) -> np.ndarray:
        u = inv_sqrt_w * v
        u = u - qs.T @ ((qs.conj() @ u) / norms)
        return inv_sqrt_w * u

    return _power_iteration(apply_op, ks.size)


def worst_case_ratio_gap(problem: RatioProblem) -> float:
    """Certified bound on how much the untruncated supremum can exceed the
    truncated one: any mass beyond the cutoff yields ratio at most this."""
    return float(problem.cutoff + 1) ** (-2 * problem.r)


def ellipsoid_width(cls: SmoothnessClass, n_dim: int, cutoff: int) -> float:
    """The (n_dim+1)-th largest semiaxis 1/|k|^r of the class ellipsoid.

    The even class carries the constant as an infinite semiaxis which any
    optimal subspace must contain; it occupies one dimension.
    """
    if n_dim < 0:
        raise ValueError("subspace dimension must be nonnegative")
    r = cls.order
    if cls.symmetry is SymmetryClass.ODD:
        axes = [1.0 / float(k) ** r for k in range(1, cutoff + 1)]
    elif cls.symmetry is SymmetryClass.EVEN:
        axes = [math.inf] + [1.0 / float(k) ** r for k in range(1, cutoff + 1)]
    else:
        axes = [1.0 / float(k) ** r for k in range(1, cutoff + 1, 2)]
    if n_dim >= len(axes):
        raise TruncationTooSmallError(
            f"need more than {len(axes)} semiaxes for n_dim={n_dim}")
    return axes[n_dim]


def optimal_trig_space(cls: SmoothnessClass, n_dim: int) -> ShiftSpaceSpec:
    """The width-attaining trigonometric space of dimension n_dim for the class,
    phrased as a shift space over a finite-spectrum generator."""
    from .kernels import Dirichlet
    if n_dim < 1:
        raise ValueError("n_dim must be >= 1")
    if cls.symmetry is SymmetryClass.ODD:
        shift_n = n_dim + 1
        return ShiftSpaceSpec(Dirichlet(shift_n - 1), shift_n, SpaceKind.ODD, n_dim)
    if cls.symmetry is SymmetryClass.EVEN:
        return ShiftSpaceSpec(Dirichlet(n_dim - 1), n_dim, SpaceKind.EVEN, n_dim)
    shift_n = 2 * n_dim + 1
    return ShiftSpaceSpec(Dirichlet(shift_n - 1), shift_n, SpaceKind.QUARTER_ODD, n_dim)


def brute_force_projection(f: TruncatedSpectrum,
                           raw_basis: list[TruncatedSpectrum],
                           cond_limit: float = 1e12) -> tuple[TruncatedSpectrum, float]:
    """Least-squares projection through the full Gram system, assuming nothing
    about orthogonality; the independent cross-check for project()."""
    if not raw_basis:
        return spectra.zero_spectrum(f.cutoff), spectra.l2_norm(f)
    freqs = sorted(set().union(*[set(b.coeffs) for b in raw_basis]) | set(f.coeffs))
    pos = {k: i for i, k in enumerate(freqs)}
    scale = math.sqrt(2.0 * math.pi)
    a_mat = np.zeros((len(freqs), len(raw_basis)), dtype=complex)
    for j, b in enumerate(raw_basis):
        for k, c in b.coeffs.items():
            a_mat[pos[k], j] = scale * c
    y = np.zeros(len(freqs), dtype=complex)
    for k, c in f.coeffs.items():
        y[pos[k]] = scale * c
    sing = np.linalg.svd(a_mat, compute_uv=False)
    if sing[0] == 0.0 or (sing[-1] == 0.0) or (sing[0] / sing[-1]) ** 2 >= cond_limit:
        raise IllConditionedError("raw basis is numerically dependent")
    coef, *_ = np.linalg.lstsq(a_mat, y, rcond=None)
    resid = y - a_mat @ coef
    approx = spectra.zero_spectrum(max(b.cutoff for b in raw_basis))
    for j, b in enumerate(raw_basis):
        approx = spectra.add(approx, spectra.scale(b, complex(coef[j])))
    return approx, float(np.linalg.norm(resid))
