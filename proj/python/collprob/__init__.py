"""Collision probabilities between Gaussian-uncertain ellipsoids."""

from collprob._core import (
    CollProbError,
    ContactResult,
    Ellipsoid,
    McEstimate,
    QuadFormSpec,
    RiskAssessment,
    SeriesResult,
    assess_collision,
    bounding_volume_check,
    cdf_series,
    center_point_probability,
    collision_probability,
    collision_upper_bound,
    contact_point,
    intersects,
    make_ellipsoid,
    mc_collision_probability,
    noncentral_chi2_cdf,
    project_onto,
    standardize,
    surface_distance,
)

__all__ = [
    "CollProbError",
    "ContactResult",
    "Ellipsoid",
    "McEstimate",
    "QuadFormSpec",
    "RiskAssessment",
    "SeriesResult",
    "assess_collision",
    "bounding_volume_check",
    "cdf_series",
    "center_point_probability",
    "collision_probability",
    "collision_upper_bound",
    "contact_point",
    "intersects",
    "make_ellipsoid",
    "mc_collision_probability",
    "noncentral_chi2_cdf",
    "project_onto",
    "standardize",
    "surface_distance",
]
