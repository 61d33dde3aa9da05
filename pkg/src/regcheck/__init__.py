"""Jacobian regularity checks for Bezier and B-spline volumes."""
from .bernstein import bernstein_eval, binomial, coefficient_weight
from .coons import (
    BlendingFunction,
    BoundarySet,
    CallableSurface,
    ContinuityError,
    UnsupportedModeError,
    blend_bound_check,
    coons_to_bezier,
    corollary_checks,
    derivative_split,
    eval_coons,
    validate_continuity,
)
from .geometry import BezierSurface, BezierVolume, eval_volume, partial_derivative, subdivide, uniform_partition
from .jacobian import (
    JacobianCoeffs,
    classify_positivity,
    jacobian_coeffs,
    jacobian_direct,
    max_reconstruction_error,
    set_threads,
)
from .splines import BSplineVolume, KnotVector, bezier_extract, eval_bspline, verify_bspline
from .verify import Certificate, VerifyConfig, verify_multipatch, verify_volume

__version__ = "0.1.0"

__all__ = [
    "bernstein_eval",
    "binomial",
    "coefficient_weight",
    "BlendingFunction",
    "BoundarySet",
    "CallableSurface",
    "ContinuityError",
    "UnsupportedModeError",
    "blend_bound_check",
    "coons_to_bezier",
    "corollary_checks",
    "derivative_split",
    "eval_coons",
    "validate_continuity",
    "BezierSurface",
    "BezierVolume",
    "eval_volume",
    "partial_derivative",
    "subdivide",
    "uniform_partition",
    "JacobianCoeffs",
    "classify_positivity",
    "jacobian_coeffs",
    "jacobian_direct",
    "max_reconstruction_error",
    "set_threads",
    "BSplineVolume",
    "KnotVector",
    "bezier_extract",
    "eval_bspline",
    "verify_bspline",
    "Certificate",
    "VerifyConfig",
    "verify_multipatch",
    "verify_volume",
]
