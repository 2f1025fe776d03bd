"""Fractional and generalized fractional Laguerre approximation on (0, inf).

Evaluation, mapped Gauss quadrature, weighted projection/interpolation,
Sobolev-scale seminorms, theoretical error-bound evaluators, and a CLI
harness that regenerates the convergence studies as CSV plus figures.
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, EvaluationError
from .laguerre import (
    QuadratureRule,
    DerivativeIdentityReport,
    eval_laguerre,
    eval_laguerre_column,
    laguerre_norm,
    gauss_rule,
    gauss_weights_explicit,
    laguerre_derivative_identities_check,
    gamma_ratio_bound,
)
from .fractional import (
    FracParams,
    FracQuadrature,
    map_forward,
    map_inverse,
    eval_flf,
    eval_flf_column,
    eval_flf_explicit,
    frac_weight,
    frac_log_weight,
    frac_quadrature,
    apply_mapped_derivative,
    derivative_coefficient_shift,
    sturm_liouville_residual,
)
from .generalized import (
    GenParams,
    GenQuadrature,
    eval_gflf,
    eval_gflf_explicit,
    gen_weight,
    gen_log_weight,
    gen_ordinary_derivative,
    gen_scaled_derivative,
    gen_quadrature,
)
from .special import (
    MLParams,
    TestFunction,
    mittag_leffler,
    ml_series,
    ml_asymptotic,
    test_function,
    eval_test_function,
    TEST_FUNCTION_IDS,
)
from .approximation import (
    Expansion,
    SobolevReport,
    BoundReport,
    project,
    interpolate,
    gen_project,
    gen_interpolate,
    weighted_l2_error,
    sobolev_seminorms,
    projection_bound,
    interpolation_bound,
    stability_bound,
    quadrature_error_bound,
    gen_projection_bound,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "EvaluationError",
    "QuadratureRule",
    "DerivativeIdentityReport",
    "eval_laguerre",
    "eval_laguerre_column",
    "laguerre_norm",
    "gauss_rule",
    "gauss_weights_explicit",
    "laguerre_derivative_identities_check",
    "gamma_ratio_bound",
    "FracParams",
    "FracQuadrature",
    "map_forward",
    "map_inverse",
    "eval_flf",
    "eval_flf_column",
    "eval_flf_explicit",
    "frac_weight",
    "frac_log_weight",
    "frac_quadrature",
    "apply_mapped_derivative",
    "derivative_coefficient_shift",
    "sturm_liouville_residual",
    "GenParams",
    "GenQuadrature",
    "eval_gflf",
    "eval_gflf_explicit",
    "gen_weight",
    "gen_log_weight",
    "gen_ordinary_derivative",
    "gen_scaled_derivative",
    "gen_quadrature",
    "MLParams",
    "TestFunction",
    "mittag_leffler",
    "ml_series",
    "ml_asymptotic",
    "test_function",
    "eval_test_function",
    "TEST_FUNCTION_IDS",
    "Expansion",
    "SobolevReport",
    "BoundReport",
    "project",
    "interpolate",
    "gen_project",
    "gen_interpolate",
    "weighted_l2_error",
    "sobolev_seminorms",
    "projection_bound",
    "interpolation_bound",
    "stability_bound",
    "quadrature_error_bound",
    "gen_projection_bound",
]
