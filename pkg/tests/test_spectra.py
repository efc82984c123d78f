"""Fourier-spectrum arithmetic: frozen examples and algebraic properties."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from shiftapprox import (BSpline, InsufficientDecayError,
                         ShiftedBSpline, add, constant_spectrum, cos_spectrum,
                         derivative, evaluate, evaluate_grid,
                         evaluate_with_error, even_part, inner_product,
                         l2_norm, l2_norm_interval, odd_part, reflect, scale,
                         shift, sin_spectrum, spectrum, truncate,
                         zero_spectrum)
from shiftapprox.spectra import TruncatedSpectrum, spectra_close


def coeffs_strategy(max_freq=8):
    finite = st.floats(-5, 5, allow_nan=False)
    return st.dictionaries(st.integers(-max_freq, max_freq),
                           st.builds(complex, finite, finite), max_size=12)


def random_spectrum(coeffs):
    return spectrum(coeffs)


class TestInnerProduct:
    def test_sin_with_itself(self):
        assert inner_product(sin_spectrum(1), sin_spectrum(1)) == pytest.approx(math.pi)

    def test_sin_cos_orthogonal(self):
        assert inner_product(sin_spectrum(1), cos_spectrum(1)) == pytest.approx(0.0)

    def test_unit_exponential(self):
        e3 = spectrum({3: 1.0})
        assert inner_product(e3, e3) == pytest.approx(2.0 * math.pi)

    @given(a=coeffs_strategy(), b=coeffs_strategy())
    def test_conjugate_symmetry(self, a, b):
        sa, sb = random_spectrum(a), random_spectrum(b)
        assert inner_product(sa, sb) == pytest.approx(
            inner_product(sb, sa).conjugate(), abs=1e-9)

    @given(a=coeffs_strategy(), b=coeffs_strategy(), c=coeffs_strategy(),
           z=st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)))
    def test_sesquilinear(self, a, b, c, z):
        sa, sb, sc = random_spectrum(a), random_spectrum(b), random_spectrum(c)
        lhs = inner_product(add(sa, scale(sb, z)), sc)
        rhs = inner_product(sa, sc) + z * inner_product(sb, sc)
        assert lhs == pytest.approx(rhs, abs=1e-8)
        rhs2 = inner_product(sc, sa) + z.conjugate() * inner_product(sc, sb)
        assert inner_product(sc, add(sa, scale(sb, z))) == pytest.approx(rhs2, abs=1e-8)


class TestNorm:
    def test_constant(self):
        assert l2_norm(constant_spectrum(1.0)) == pytest.approx(math.sqrt(2 * math.pi))

    def test_sin(self):
        assert l2_norm(sin_spectrum(1)) == pytest.approx(math.sqrt(math.pi))

    def test_box_spline_bracket_against_quadrature(self):
        # the degree-0 generator B with one shift per half period is the box
        # of height 2 on [-pi, 0]; its squared L2 norm is 4*pi
        spec = truncate(BSpline(1, 0), 64)
        val, err = quad(lambda t: 4.0 if -math.pi <= t <= 0 else 0.0,
                        -math.pi, math.pi, points=[-math.pi, 0.0], limit=200)
        lo, hi = l2_norm_interval(spec)
        target = math.sqrt(val)
        assert lo - 1e-6 <= target <= hi + 1e-6

    def test_parseval_against_quadrature(self):
        # exact trigonometric polynomial: coefficient norm vs direct quadrature
        f = spectrum({0: 0.7, 1: 1.0 - 0.5j, -1: 0.25j, 3: -2.0, -3: 1.0 + 1.0j})

        def sq(t):
            return abs(evaluate(f, t)) ** 2

        val, _ = quad(sq, -math.pi, math.pi, limit=400)
        assert l2_norm(f) ** 2 == pytest.approx(val, rel=1e-10)


class TestDerivative:
    def test_sin_to_cos(self):
        assert spectra_close(derivative(sin_spectrum(1), 1), cos_spectrum(1))

    def test_constant_to_zero(self):
        for r in (1, 2, 5):
            assert not derivative(constant_spectrum(3.0), r).coeffs

    def test_exponential_r3(self):
        out = derivative(spectrum({2: 1.0}), 3)
        assert out.coeff(2) == pytest.approx(-8.0j)

    def test_truncated_without_decay_rejected(self):
        bad = TruncatedSpectrum({1: 1.0}, 4, tail_bound=0.5)
        with pytest.raises(InsufficientDecayError):
            derivative(bad, 1)

    def test_truncated_with_decay_updates_tail(self):
        spec = truncate(BSpline(2, 3), 64)
        out = derivative(spec, 2)
        assert out.tail_bound > spec.tail_bound > 0.0
        assert out.decay.exponent == pytest.approx(spec.decay.exponent - 2)

    def test_decay_too_slow_rejected(self):
        spec = truncate(BSpline(2, 0), 64)  # exponent 1: differentiated tail blows up
        with pytest.raises(InsufficientDecayError):
            derivative(spec, 1)


class TestParts:
    def test_exponential_split(self):
        e1 = spectrum({1: 1.0})
        assert spectra_close(even_part(e1), cos_spectrum(1))
        # odd part of e^{ix} is i sin x
        assert spectra_close(odd_part(e1), scale(sin_spectrum(1), 1j))

    def test_even_input_fixed(self):
        c2 = cos_spectrum(2)
        assert spectra_close(even_part(c2), c2)
        assert not odd_part(c2).coeffs

    def test_parts_recombine_for_shifted_spline(self):
        spec = shift(truncate(BSpline(2, 1), 64), math.pi / 4)
        back = add(even_part(spec), odd_part(spec))
        assert spectra_close(back, spec)

    @given(a=coeffs_strategy())
    def test_parts_recombine_and_have_parity(self, a):
        sa = random_spectrum(a)
        e, o = even_part(sa), odd_part(sa)
        assert spectra_close(add(e, o), sa)
        assert spectra_close(reflect(e), e)
        assert spectra_close(reflect(o), scale(o, -1.0))


class TestReflect:
    def test_sin_negates(self):
        assert spectra_close(reflect(sin_spectrum(1)), scale(sin_spectrum(1), -1.0))

    def test_even_unchanged(self):
        assert spectra_close(reflect(cos_spectrum(3)), cos_spectrum(3))

    @given(a=coeffs_strategy())
    def test_involution(self, a):
        sa = random_spectrum(a)
        assert spectra_close(reflect(reflect(sa)), sa)


class TestShift:
    def test_sin_by_pi(self):
        assert spectra_close(shift(sin_spectrum(1), math.pi),
                             scale(sin_spectrum(1), -1.0))

    def test_zero_shift_identity(self):
        f = spectrum({2: 1.0 + 2.0j, -5: 0.5})
        assert spectra_close(shift(f, 0.0), f)

    def test_half_knot_shift_matches_closed_form(self):
        # the closed form of the half-step-translated generator is the plain
        # one multiplied by exp(-ik pi/(2n))
        n, mu, K = 4, 2, 64
        shifted = shift(truncate(BSpline(n, mu), K), math.pi / (2 * n))
        direct = truncate(ShiftedBSpline(n, mu), K)
        assert spectra_close(shifted, direct)

    @given(a=coeffs_strategy(), h=st.floats(-3.0, 3.0),
           r=st.integers(1, 3))
    def test_derivative_commutes_with_shift(self, a, h, r):
        sa = random_spectrum(a)
        assert spectra_close(derivative(shift(sa, h), r),
                             shift(derivative(sa, r), h), rel_tol=1e-9)


class TestEvaluate:
    def test_constant(self):
        assert evaluate(constant_spectrum(1.0), 1.234) == pytest.approx(1.0)

    def test_sin_at_half_pi(self):
        assert evaluate(sin_spectrum(1), math.pi / 2) == pytest.approx(1.0)

    def test_box_spline_values(self):
        # B for n=2, degree 0 is the box of height 4 on [-pi/2, 0]
        spec = truncate(BSpline(2, 0), 4096)
        assert abs(evaluate(spec, math.pi / 4)) < 1e-2
        assert evaluate(spec, -math.pi / 4).real == pytest.approx(4.0, abs=1e-2)

    def test_pointwise_error_bound(self):
        spec = truncate(BSpline(2, 2), 128)
        val, err = evaluate_with_error(spec, 0.3)
        assert err > 0.0
        tighter = evaluate(truncate(BSpline(2, 2), 4096), 0.3)
        assert abs(val - tighter) <= err

    def test_grid_matches_scalar(self):
        f = spectrum({0: 1.0, 2: 1.0 - 1.0j, -3: 0.5j})
        xs = np.linspace(-math.pi, math.pi, 17)
        grid_vals = evaluate_grid(f, xs)
        for x, v in zip(xs, grid_vals):
            assert v == pytest.approx(evaluate(f, x), abs=1e-12)


class TestInvariants:
    def test_cutoff_enforced(self):
        with pytest.raises(ValueError):
            TruncatedSpectrum({5: 1.0}, 3)

    def test_negative_tail_rejected(self):
        with pytest.raises(ValueError):
            TruncatedSpectrum({1: 1.0}, 2, tail_bound=-0.1)

    def test_exact_objects_have_zero_tail(self):
        assert sin_spectrum(3).tail_bound == 0.0
        assert zero_spectrum().tail_bound == 0.0
