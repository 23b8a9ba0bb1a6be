"""weberorr: numerical Weber-Orr / Weber-type integral-equation toolkit."""

from .closedform import (F_nu_bound, F_nu_closed, F_nu_closed_batch,
                         F_nu_oracle, FnuTermBreakdown)
from .errors import (ConvergenceError, DivergenceError, DomainError,
                     MembershipError, PoleProximityError, StripError,
                     WeberOrrError)
from .kernels import (KernelParams, derivative_identity_check,
                      kernel_asymptotic, kernel_C, weber_kernel)
from .mellin import (ContourSpec, MellinRepresentation, class_norm,
                     contour_integral, mellin_forward, mellin_inverse,
                     parseval_check)
from .quadrature import (QuadratureConfig, integrate_improper,
                         integrate_oscillatory_tail,
                         integrate_semiinfinite_from_a)
from .report import EvaluationReport
from .solver import (SolveResult, TestFunctionFamily, default_contour,
                     expansion_titchmarsh, expansion_weber_orr,
                     forward_contour, forward_direct, inverse_solve,
                     inverse_solve_derivative_form, make_forward_function,
                     reduced_equation_check, solve_grid)

__version__ = "0.1.0"

__all__ = [
    "ContourSpec", "ConvergenceError", "DivergenceError", "DomainError",
    "EvaluationReport", "F_nu_bound", "F_nu_closed", "F_nu_closed_batch",
    "F_nu_oracle", "FnuTermBreakdown", "KernelParams", "MembershipError",
    "MellinRepresentation", "PoleProximityError", "QuadratureConfig",
    "SolveResult", "StripError", "TestFunctionFamily", "WeberOrrError",
    "class_norm", "contour_integral", "default_contour",
    "derivative_identity_check", "expansion_titchmarsh", "expansion_weber_orr",
    "forward_contour", "forward_direct", "integrate_improper",
    "integrate_oscillatory_tail", "integrate_semiinfinite_from_a",
    "inverse_solve", "inverse_solve_derivative_form", "kernel_C",
    "kernel_asymptotic", "make_forward_function", "mellin_forward",
    "mellin_inverse", "parseval_check", "reduced_equation_check",
    "solve_grid", "weber_kernel", "__version__",
]
