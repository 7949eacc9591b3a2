"""Geodesics on the Stiefel manifold St(n, p) under the beta-metric.

Points are n x p numpy arrays with orthonormal columns; tangent vectors are
n x p arrays Delta with U^T Delta skew-symmetric.
"""

from ._core import (
    Curve,
    InvalidInput,
    NotApplicable,
    NumericalFailure,
    __version__,
    branch_lengths,
    branch_pair,
    certify,
    diameter_euclidean,
    exp,
    exp_ray,
    expm,
    frobenius_distance,
    gamma_k,
    gamma_k_distance_law,
    gamma_k_tangent,
    great_circle_curve,
    lipschitz,
    log,
    lower_attained,
    lower_envelope,
    norm,
    orthonormality_error,
    project_tangent,
    random_stiefel,
    slope_ratio,
    upper_envelope,
    upper_envelope_proven,
    w_upper_on_lower,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
