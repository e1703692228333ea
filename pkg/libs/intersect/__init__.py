"""Signed intersections of saddle connections and closed curves."""

from .base import (
    BMIntersectionCheck,
    ClosedCurve,
    CrossingMatrix,
    CurveValidationError,
    DegenerateSingularError,
    InteriorCrossing,
    IntersectionCheck,
    IntersectionReport,
    Junction,
    OverlapError,
    SingularContribution,
)
from .crossings import crossing_matrix, sampled_crossing_count, transverse_crossings
from .singular import algebraic_intersection, singular_sign
from .tables import (
    big_cylinder_bound,
    intersection_bound,
    verify_bm_intersection_bound,
    verify_intersection_table,
)

__all__ = [
    "BMIntersectionCheck",
    "ClosedCurve",
    "CrossingMatrix",
    "CurveValidationError",
    "DegenerateSingularError",
    "InteriorCrossing",
    "IntersectionCheck",
    "IntersectionReport",
    "Junction",
    "OverlapError",
    "SingularContribution",
    "algebraic_intersection",
    "big_cylinder_bound",
    "crossing_matrix",
    "intersection_bound",
    "sampled_crossing_count",
    "singular_sign",
    "transverse_crossings",
    "verify_bm_intersection_bound",
    "verify_intersection_table",
]
