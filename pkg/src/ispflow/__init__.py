"""Transseries renormalization of conformal quantum mechanics in one
dimension: exact running-coupling tables, beta functions in the bound and
scattering sectors, high-precision flow numerics, and perturbative
divergence classification of the transition matrix."""

from .constexpr import ConstExpr, GRat, GENERATORS
from .series import TruncSeries, SeriesError
from .transseries import Transseries
from .coupling import CouplingTable, resummation_check, structure_fit
from .bound import (BetaTransseries, GroundStateCondition,
                    beta_exact_sector_eval, beta_transseries,
                    build_ground_state_condition, excited_state_scale,
                    ground_state_transseries, running_coupling_coeffs)
from .scatter import (PhaseCondition, analytic_continuation_check,
                      build_phase_condition, cross_sector_expansion,
                      fixed_point_relation, scatter_beta,
                      scatter_coupling_coeffs)
from .specfun import (ComplexHP, arg_i_unwrapped, bessel_i_imag,
                      bessel_j_imag, bessel_k_imag, complex_gamma,
                      hankel1_imag, hankel2_imag)
from .rgnumeric import (ContourGrid, QuantizationSolution, contour_grid,
                        numeric_beta, phase_shift, smatrix,
                        smatrix_pole_check, solve_running_coupling,
                        solve_scattering_coupling)
from .tmatrix import (DivergenceReport, FirstOrderElement, MatrixElementSpec,
                      classify_divergence, divergence_table,
                      first_order_element, second_order_integral)

__version__ = "0.1.0"
