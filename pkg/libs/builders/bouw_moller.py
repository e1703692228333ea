"""Bouw-Moller surfaces S_{m,n} as chains of semi-regular polygons."""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from libs.surface import (
    PolygonSpec,
    SurfaceValidationError,
    TranslationSurface,
    build_surface,
)
from libs.surface.base import EdgeRef, FamilyTag

from .base import BouwMollerParams, BuilderParameterError

logger = structlog.get_logger()

LAYOUT_GAP = 0.25


@dataclass(frozen=True)
class BouwMollerLayout:
    """Edge bookkeeping for the polygons P(0), ..., P(m-1).

    Edge directions are indexed by ``k``: direction kπ/n, 0 <= k < 2n. Edges
    whose ``k`` has the polygon's "up" parity are glued to P(i+1), the others
    to P(i-1).
    """

    params: BouwMollerParams

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return self.params.n

    def down_parity(self, i: int) -> int:
        return (1 + i * (1 + self.n)) % 2

    def up_parity(self, i: int) -> int:
        return (self.down_parity(i) + 1) % 2

    def raw_length(self, i: int, k: int) -> float:
        if k % 2 == self.up_parity(i):
            return math.sin((i + 1) * math.pi / self.m)
        return math.sin(i * math.pi / self.m)

    def length(self, i: int, k: int) -> float:
        return self.raw_length(i, k) * self.params.scale

    def is_up(self, i: int, k: int) -> bool:
        return k % 2 == self.up_parity(i)

    def polygon_ids(self) -> List[int]:
        """Polygons that survive; for n = 2 the end polygons are 2-gons and vanish."""
        if self.n == 2:
            return list(range(1, self.m - 1))
        return list(range(self.m))

    def directions(self, i: int) -> List[int]:
        """Direction indices ``k`` of the non-degenerate edges of P(i), in order."""
        if not 0 <= i < self.m:
            raise BuilderParameterError(f"polygon index {i} outside 0..{self.m - 1}")
        return [k for k in range(2 * self.n) if self.raw_length(i, k) > 1e-12]

    def edge_index(self, i: int, k: int) -> int:
        return self.directions(i).index(k % (2 * self.n))

    def direction_index(self, i: int, edge: int) -> int:
        return self.directions(i)[edge]

    def is_long(self, i: int, edge: int) -> bool:
        """Whether the edge is the longer of P(i)'s two alternating lengths."""
        k = self.direction_index(i, edge)
        other = (k + 1) % (2 * self.n)
        if self.raw_length(i, other) <= 1e-12:
            return True
        return self.raw_length(i, k) > self.raw_length(i, other) + 1e-12

    def label(self, i: int, k: int) -> str:
        if self.n == 2 and self._self_glued(i, k):
            return f"{i}s{k % 2}"
        if self.is_up(i, k):
            return f"{i}:{k}"
        return f"{i - 1}:{(k - self.n) % (2 * self.n)}"

    def _self_glued(self, i: int, k: int) -> bool:
        if self.is_up(i, k):
            return i + 1 == self.m - 1
        return i - 1 == 0

    def gluings(self) -> List[Tuple[EdgeRef, EdgeRef]]:
        alive = set(self.polygon_ids())
        pairs: List[Tuple[EdgeRef, EdgeRef]] = []
        for i in sorted(alive):
            for k in self.directions(i):
                if not self.is_up(i, k):
                    continue
                if i + 1 in alive:
                    partner_k = (k + self.n) % (2 * self.n)
                    target = (i + 1, self.edge_index(i + 1, partner_k))
                    pairs.append(((i, self.edge_index(i, k)), target))
                elif k < self.n:
                    pairs.append(
                        (
                            (i, self.edge_index(i, k)),
                            (i, self.edge_index(i, k + self.n)),
                        )
                    )
            if i - 1 not in alive and i - 1 >= 0:
                for k in self.directions(i):
                    if not self.is_up(i, k) and k < self.n:
                        pairs.append(
                            (
                                (i, self.edge_index(i, k)),
                                (i, self.edge_index(i, k + self.n)),
                            )
                        )
        return pairs


def semi_regular_polygon(
    i: int,
    m: int,
    n: int,
    normalized: bool = True,
    origin: Tuple[float, float] = (0.0, 0.0),
) -> PolygonSpec:
    """Equiangular polygon P(i) of S_{m,n} with its first vertex at ``origin``.

    P(0) and P(m-1) have one degenerate alternation class and come out as
    regular n-gons.
    """
    layout = BouwMollerLayout(BouwMollerParams(m, n, normalized))
    ks = layout.directions(i)
    vertices: List[Tuple[float, float]] = []
    x, y = origin
    for k in ks:
        vertices.append((x, y))
        length = layout.length(i, k)
        x += length * math.cos(k * math.pi / n)
        y += length * math.sin(k * math.pi / n)
    return PolygonSpec(
        id=i,
        vertices=tuple(vertices),
        labels=tuple(layout.label(i, k) for k in ks),
    )


def bouw_moller(m: int, n: int, normalized: bool = True) -> TranslationSurface:
    """Build S_{m,n}, polygons laid out left to right."""
    params = BouwMollerParams(m, n, normalized)
    layout = BouwMollerLayout(params)
    polygons: List[PolygonSpec] = []
    cursor: Optional[float] = None
    for i in layout.polygon_ids():
        polygon = semi_regular_polygon(i, m, n, normalized)
        points = polygon.points
        shift_x = 0.0 if cursor is None else cursor - float(points[:, 0].min())
        shift = np.array([shift_x, -float(points[:, 1].mean())])
        placed = PolygonSpec(
            id=i,
            vertices=tuple((float(p[0]), float(p[1])) for p in points + shift),
            labels=polygon.labels,
        )
        polygons.append(placed)
        cursor = float(placed.points[:, 0].max()) + LAYOUT_GAP * params.scale

    family = FamilyTag(kind="bouw_moller", m=m, n=n, normalized=normalized)
    surface = build_surface(polygons, layout.gluings(), family=family)
    if len(surface.singularities) != params.d:
        raise SurfaceValidationError(
            f"S_{m},{n} has {len(surface.singularities)} singularities, "
            f"expected gcd = {params.d}"
        )
    rotation_automorphism(surface, 2.0 * math.pi / n)
    logger.info(
        "bouw_moller_built",
        m=m,
        n=n,
        normalized=normalized,
        singularities=len(surface.singularities),
        area=round(surface.area, 9),
    )
    return surface


def rotation_automorphism(
    surface: TranslationSurface, angle: float, tol: float = 1e-7
) -> Dict[EdgeRef, EdgeRef]:
    """Edge permutation induced by rotating every polygon about its centroid.

    Raises SurfaceValidationError unless each polygon is mapped onto itself
    and the gluing set onto itself.
    """
    rotation = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
    )
    permutation: Dict[EdgeRef, EdgeRef] = {}
    for polygon in surface.polygons:
        centered = polygon.points - polygon.centroid
        rotated = centered @ rotation.T
        shift = _cyclic_shift(centered, rotated, tol)
        if shift is None:
            raise SurfaceValidationError(
                f"rotation by {angle:.6f} does not map polygon {polygon.id} to itself"
            )
        for edge in range(polygon.size):
            image = (edge + shift) % polygon.size
            permutation[(polygon.id, edge)] = (polygon.id, image)
    for gluing in surface.gluings:
        image_first = permutation[gluing.first]
        image_second = permutation[gluing.second]
        if surface.partner(image_first) != image_second:
            raise SurfaceValidationError(
                f"rotation by {angle:.6f} breaks gluing {gluing.first}-{gluing.second}"
            )
    return permutation


def _cyclic_shift(
    points: np.ndarray, rotated: np.ndarray, tol: float
) -> Optional[int]:
    size = len(points)
    for shift in range(size):
        if np.allclose(rotated, np.roll(points, -shift, axis=0), atol=tol):
            return shift
    return None
