"""Shift-generated subspaces of periodic functions: orthogonal bases,
certified approximation-bound checks, width oracles, and uniform-knot
spline spaces on a segment."""

from .conditions import (ConditionItem, ConditionReport, SampleOutsideClassError,
                         check_coefficient_domination, check_even_bound,
                         check_odd_bound, check_quarter_bound,
                         check_uniform_bound, check_zero_mean_bound,
                         random_symmetric_polynomial, space_bound,
                         verify_jackson_bound, verify_refined_bounds)
from .kernels import (BSpline, CustomKernel, DiffOperator, Dirichlet,
                      GeneralizedBernoulli, Heat, Kernel, Poisson,
                      ShiftedBSpline, Weighted, truncate, weight_value)
from .segment import (BoundaryViolationError, KnotParity, KnotVector,
                      SampledFunction, SplineSpaceSpec, detect_knots,
                      dimension_check, knots_for, periodize, q_space_basis,
                      read_sampled_csv, restrict, uniform_knots,
                      verify_boundary, write_sampled_csv)
from .spaces import (BasisElement, DegenerateBasisError, ProjectionResult,
                     ShiftSpaceSpec, SpaceKind, basis, basis_function,
                     gram_diagonal, project, project_onto,
                     reflection_coefficient, NO_REFLECTION)
from .spectra import (DecayBound, InsufficientDecayError, SmoothnessClass,
                      SymmetryClass, TruncatedSpectrum, add, constant_spectrum,
                      cos_spectrum, derivative, evaluate, evaluate_grid,
                      evaluate_with_error, even_part, inner_product, l2_norm,
                      l2_norm_interval, odd_part, reflect, scale, shift,
                      sin_spectrum, spectrum, subtract, zero_spectrum)
from .widths import (ConstantNotAbsorbedError, IllConditionedError,
                     NonConvergenceError, RatioProblem, TruncationTooSmallError,
                     brute_force_projection, ellipsoid_width,
                     optimal_trig_space, worst_case_ratio, worst_case_ratio_gap)

__version__ = "0.1.0"
