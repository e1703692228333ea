"""Regular n-gon surfaces and the square torus."""

import math
from typing import List, Optional, Tuple

import numpy as np
import structlog

from libs.surface import PolygonSpec, TranslationSurface, build_surface
from libs.surface.base import FamilyTag

from .base import NgonParams

logger = structlog.get_logger()


def ngon_label(edge: int, n: int) -> str:
    """Side label of edge ``edge``; labels run clockwise so they read 1..n/2
    counter-clockwise around each singularity."""
    half = n // 2
    return str((-edge) % half + 1)


def regular_ngon(n: int) -> TranslationSurface:
    """Regular n-gon with unit sides and opposite sides glued.

    Vertex 0 sits at the origin and edge ``k`` has direction 2πk/n, so edge 0
    is the horizontal bottom side.
    """
    params = NgonParams(n)
    vertices: List[Tuple[float, float]] = []
    x, y = 0.0, 0.0
    for k in range(n):
        vertices.append((x, y))
        x += math.cos(2.0 * math.pi * k / n)
        y += math.sin(2.0 * math.pi * k / n)
    polygon = PolygonSpec(
        id=0,
        vertices=tuple(vertices),
        labels=tuple(ngon_label(k, n) for k in range(n)),
    )
    gluings = [((0, k), (0, k + params.labels)) for k in range(params.labels)]
    surface = build_surface([polygon], gluings, family=FamilyTag(kind="ngon", n=n))
    logger.info(
        "ngon_built",
        n=n,
        singularities=len(surface.singularities),
        area=round(surface.area, 9),
    )
    return surface


def regular_ngon_area(n: int) -> float:
    """Closed form (n/4)·cot(π/n) for unit side length."""
    return n / (4.0 * math.tan(math.pi / n))


def square_torus() -> TranslationSurface:
    polygon = PolygonSpec(
        id=0,
        vertices=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
        labels=("a", "b", "a", "b"),
    )
    return build_surface(
        [polygon], [((0, 0), (0, 2)), ((0, 1), (0, 3))], family=FamilyTag("torus")
    )


def detect_ngon(surface: TranslationSurface, tol: float = 1e-7) -> Optional[int]:
    """Return n if the surface is a unit regular n-gon with opposite sides glued."""
    if len(surface.polygons) != 1:
        return None
    polygon = surface.polygons[0]
    n = polygon.size
    if n < 8 or n % 2 != 0:
        return None
    if not np.allclose(polygon.edge_lengths, 1.0, atol=tol):
        return None
    if abs(polygon.edges[0][1]) > tol or polygon.edges[0][0] <= 0.0:
        return None
    angles = [polygon.interior_angle(k) for k in range(n)]
    if not np.allclose(angles, math.pi * (n - 2) / n, atol=tol):
        return None
    if any(surface.partner((0, k)) != (0, (k + n // 2) % n) for k in range(n)):
        return None
    return n
