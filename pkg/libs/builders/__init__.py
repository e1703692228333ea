"""Constructors for regular n-gon and Bouw-Moller surfaces."""

from .base import BouwMollerParams, BuilderParameterError, NgonParams
from .bouw_moller import (
    BouwMollerLayout,
    bouw_moller,
    rotation_automorphism,
    semi_regular_polygon,
)
from .ngon import (
    detect_ngon,
    ngon_label,
    regular_ngon,
    regular_ngon_area,
    square_torus,
)
from .registry import surface_by_name

__all__ = [
    "BouwMollerLayout",
    "BouwMollerParams",
    "BuilderParameterError",
    "NgonParams",
    "bouw_moller",
    "detect_ngon",
    "ngon_label",
    "regular_ngon",
    "regular_ngon_area",
    "rotation_automorphism",
    "semi_regular_polygon",
    "square_torus",
    "surface_by_name",
]
