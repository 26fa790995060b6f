"""Weighted orthogonal expansions on the sphere, ball and simplex.

Numerics for expansions orthogonal with respect to reflection-invariant
product weights: reproducing kernels through the explicit intertwining
operator, convolutions and generalized translations, cap averages and
maximal functions, and the Poisson, de la Vallee Poussin and Cesaro
summation methods, all verified against quadrature and Monte Carlo
oracles at desk scale.
"""

from .specfun import (GegenbauerIndex, JacobiParams, NormConstants,
                      gegenbauer, gegenbauer_table, hyp2f1,
                      jacobi_orthonormal, jacobi_orthonormal_table,
                      norm_constants)
from .quadrature import (DomainRule, QuadRule1D, WeightSpec, ball_lift,
                         ball_rule, domain_rule, gauss_jacobi, mc_oracle,
                         sample_points, simplex_lift, simplex_rule,
                         sphere_rule)
from .intertwine import (CapSpec, VOperator, make_v_operator, v_apply,
                         v_indicator, v_indicator_batch)
from .kernels import (KernelProfile, Majorant, cesaro_majorant,
                      cesaro_profile, dlvp_coeffs, dlvp_profile,
                      jacobi_poisson_profile, poisson_profile,
                      repro_kernel_ball, repro_kernel_simplex,
                      repro_kernel_sphere)
from .transform import (MeanRequest, ScalarField, bernstein_durrmeyer,
                        cap_average, cap_average_two_forms, convolve,
                        partial_sum, project, projection_table, quad_norm,
                        summation_mean, translate)
from .maximal import (CapAverageTable, MaximalReport, ThetaGrid,
                      majorization_audit, maximal, maximal_report)

__version__ = "0.1.0"
