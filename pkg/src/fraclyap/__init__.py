"""Discrete fractional boundary value problems of order ``1 < alpha <= 2``.

Fractional sums/differences on shifted grids, the closed-form Green's
function, a Picard solver with a direct linear oracle, and Lyapunov-type
inequality certificates.
"""

from .estimators import FractionalDifference, FractionalSum, GreenSolver, PicardSolver
from .exceptions import (
    DomainError,
    EmptyWindowError,
    FracLyapError,
    GridIndexError,
    GridLengthError,
    InvariantViolation,
    IterationError,
    SingularSystemError,
    ZeroSumError,
)
from .exprlang import parse
from .fracops import GridFunction, ShiftedGrid, forward_diff, frac_diff, frac_sum
from .green import (
    ConeWindow,
    GreenTable,
    cone_window,
    green_max_closed_form,
    green_table,
    green_value,
    lambda_constant,
)
from .lyapunov import (
    Certificate,
    ExistenceConstants,
    certify,
    check_H1_H2,
    eigen_exclusion,
    existence_constants,
    gamma_exact,
    gamma_paper,
    gamma_star_exact,
    gamma_star_paper,
    lyapunov_rhs_co,
    lyapunov_rhs_th0,
)
from .solver import ProblemSpec, Solution, apply_T, cone_check, residual, solve_linear_direct, solve_picard
from .specfun import falling_power, ln_gamma

__version__ = "0.1.0"
