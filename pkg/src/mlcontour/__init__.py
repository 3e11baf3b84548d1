"""Reciprocal gamma and two-parameter Mittag-Leffler functions via rotated
Hankel-type loop integrals, with series/closed-form/legacy-loop cross-checks.
"""

from .errors import (
    ContourValidityError,
    ConvergenceError,
    IntegrandError,
    MlcError,
    PreconditionError,
)
from .gamma import (
    DEFAULT_GAMMA_SPEC,
    GammaEvaluation,
    is_gamma_pole,
    log_gamma,
    recip_gamma_contour,
    recip_gamma_lambda,
    recip_gamma_oracle,
    reflection_residual,
)
from .geometry import (
    ArcSegment,
    GammaContourSpec,
    IntegrationPath,
    LambdaSpec,
    MLContourSpec,
    PolarComplex,
    RaySegment,
    ValidityReport,
    Violation,
    build_gamma_path,
    build_lambda_path,
    build_zeta_path,
    default_ml_deltas,
    gamma_psi_window,
    ml_arg_window,
    validate_gamma_contour,
    validate_lambda_contour,
    validate_ml_contour,
)
from .mittag_leffler import (
    CANCELLATION_DIGITS_LIMIT,
    ComparisonReport,
    MethodOutcome,
    MLEvaluation,
    MLParams,
    SeriesDiagnostics,
    compare_methods,
    default_ml_spec,
    dzhrbashyan_theta_window,
    ml_bateman,
    ml_closed_form,
    ml_contour,
    ml_dzhrbashyan,
    ml_series,
)
from .quadrature import (
    DEFAULT_QUADRATURE,
    DecayModel,
    QuadratureConfig,
    QuadratureResult,
    integrate_arc,
    integrate_path,
    integrate_ray,
    truncation_radius,
)

__version__ = "0.1.0"

__all__ = [
    "ArcSegment",
    "CANCELLATION_DIGITS_LIMIT",
    "ComparisonReport",
    "ContourValidityError",
    "ConvergenceError",
    "DecayModel",
    "DEFAULT_GAMMA_SPEC",
    "DEFAULT_QUADRATURE",
    "GammaContourSpec",
    "GammaEvaluation",
    "IntegrandError",
    "IntegrationPath",
    "LambdaSpec",
    "MethodOutcome",
    "MLContourSpec",
    "MLEvaluation",
    "MLParams",
    "MlcError",
    "PolarComplex",
    "PreconditionError",
    "QuadratureConfig",
    "QuadratureResult",
    "RaySegment",
    "SeriesDiagnostics",
    "ValidityReport",
    "Violation",
    "build_gamma_path",
    "build_lambda_path",
    "build_zeta_path",
    "compare_methods",
    "default_ml_deltas",
    "default_ml_spec",
    "dzhrbashyan_theta_window",
    "gamma_psi_window",
    "integrate_arc",
    "integrate_path",
    "integrate_ray",
    "is_gamma_pole",
    "log_gamma",
    "ml_arg_window",
    "ml_bateman",
    "ml_closed_form",
    "ml_contour",
    "ml_dzhrbashyan",
    "ml_series",
    "recip_gamma_contour",
    "recip_gamma_lambda",
    "recip_gamma_oracle",
    "reflection_residual",
    "truncation_radius",
    "validate_gamma_contour",
    "validate_lambda_contour",
    "validate_ml_contour",
]
