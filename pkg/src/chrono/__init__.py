"""Exponentially weighted space-time Galerkin methods with B-splines."""

from .cases import CASES, ExactSolution, get_case, polynomial_case
from .coercivity import CoercivityQuery, coercivity_constant, gram_matrix
from .errors import (DegenerateNormalizationError, EigenConvergenceError, NotPositiveDefiniteError,
                     NumericalError, OrthogonalityLossError, QuadratureConstructionError,
                     RankDeficiencyError, SingularMatrixError, ValidationError)
from .linalg import cholesky, gen_sym_eig, lu_solve, sym_eig
from .ode import (DiscreteSolution, OdeSystem, assemble_ode, figure_errors, ode_error,
                  solve_ode)
from .orthopoly import OrthoBasis, build_orthopolys, eval_orthopoly, jacobi_matrix
from .projections import (PiecewisePolynomial, nodal_error, project_ph, project_pi_dt2,
                          project_qh)
from .quadrature import (QuadRule, WeightedQuadRule, composite_gauss, exp_moments,
                         gauss_legendre, weighted_element_rule)
from .report import ConvergenceReport, fit_rate
from .spacetime import (SpaceTimeExact, SpaceTimeProblem, SpaceTimeSolution, solve_spacetime,
                        solve_spacetime_dense, spacetime_error, wave_case, zero_case)
from .spline import SplineSpace, build_space, eval_basis

__version__ = "0.1.0"
