"""Translation surfaces built from glued polygons."""

from .base import (
    EPS_ANG,
    EPS_LEN,
    TWO_PI,
    FanCorner,
    InvalidReferenceError,
    Placement,
    PolygonSpec,
    RayOutsideSectorError,
    SideGluing,
    Singularity,
    SurfaceValidationError,
    cross2,
    direction_angle,
)
from .spec_io import (
    SurfaceSpecModel,
    dump_surface_spec,
    dumps_surface_spec,
    load_surface_spec,
    parse_surface_spec,
    spec_digest,
)
from .surface import TranslationSurface, build_surface

__all__ = [
    "EPS_ANG",
    "EPS_LEN",
    "TWO_PI",
    "FanCorner",
    "InvalidReferenceError",
    "Placement",
    "PolygonSpec",
    "RayOutsideSectorError",
    "SideGluing",
    "Singularity",
    "SurfaceSpecModel",
    "SurfaceValidationError",
    "TranslationSurface",
    "build_surface",
    "cross2",
    "direction_angle",
    "dump_surface_spec",
    "dumps_surface_spec",
    "load_surface_spec",
    "parse_surface_spec",
    "spec_digest",
]
