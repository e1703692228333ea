"""Base types and errors for translation surfaces."""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

EPS_LEN = 1e-9
EPS_ANG = 1e-9
TWO_PI = 2.0 * math.pi

Point = Tuple[float, float]
EdgeRef = Tuple[int, int]
CornerRef = Tuple[int, int]


class SurfaceValidationError(ValueError):
    """Raised when polygons or gluings do not describe a translation surface."""


class InvalidReferenceError(ValueError):
    """Raised for a polygon, edge or vertex reference that does not exist."""


class RayOutsideSectorError(ValueError):
    """Raised when a ray does not point into the named corner."""


def direction_angle(vector: np.ndarray) -> float:
    """Return the direction of a planar vector in [0, 2π)."""
    angle = math.atan2(float(vector[1]), float(vector[0]))
    if angle < 0.0:
        angle += TWO_PI
    if angle >= TWO_PI:
        angle -= TWO_PI
    return angle


def cross2(a: np.ndarray, b: np.ndarray) -> float:
    """Return the z-component of the cross product of two planar vectors."""
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class PolygonSpec:
    """A convex polygon with counter-clockwise vertices and one label per edge.

    Edge ``i`` runs from vertex ``i`` to vertex ``i + 1`` (cyclically).
    """

    id: int
    vertices: Tuple[Point, ...]
    labels: Tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def points(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def edges(self) -> np.ndarray:
        """Edge vectors, row ``i`` is ``v[i+1] - v[i]``."""
        return np.roll(self.points, -1, axis=0) - self.points

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        return np.hypot(self.edges[:, 0], self.edges[:, 1])

    @cached_property
    def area(self) -> float:
        x = self.points[:, 0]
        y = self.points[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @cached_property
    def diameter(self) -> float:
        diffs = self.points[:, None, :] - self.points[None, :, :]
        return float(np.max(np.hypot(diffs[..., 0], diffs[..., 1])))

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def vertex(self, index: int) -> np.ndarray:
        return self.points[index % self.size]

    def interior_angle(self, index: int) -> float:
        """Angle swept counter-clockwise from edge ``index`` to the previous edge."""
        out_edge = self.edges[index % self.size]
        back_edge = -self.edges[(index - 1) % self.size]
        angle = math.atan2(
            cross2(out_edge, back_edge), float(np.dot(out_edge, back_edge))
        )
        if angle <= 0.0:
            angle += TWO_PI
        return angle

    def edge_direction(self, index: int) -> float:
        return direction_angle(self.edges[index % self.size])

    def translated(self, offset: np.ndarray) -> np.ndarray:
        return self.points + np.asarray(offset, dtype=float)


@dataclass(frozen=True)
class SideGluing:
    """Identification of two antiparallel edges by a translation.

    ``translation`` maps points of ``first`` onto the matching points of
    ``second`` in native polygon coordinates; None derives it from the
    vertices.
    """

    first: EdgeRef
    second: EdgeRef
    translation: Optional[Point] = None


@dataclass(frozen=True)
class FanCorner:
    """One polygon corner inside the ray fan of a singularity."""

    polygon_id: int
    vertex: int
    start: float
    angle: float
    direction: float

    @property
    def corner(self) -> CornerRef:
        return (self.polygon_id, self.vertex)

    @property
    def end(self) -> float:
        return self.start + self.angle


@dataclass(frozen=True)
class Singularity:
    """A cone point with its counter-clockwise fan of corners."""

    id: int
    cone_angle: float
    fan: Tuple[FanCorner, ...] = field(repr=False)

    @property
    def representative(self) -> CornerRef:
        return self.fan[0].corner

    @property
    def order(self) -> int:
        """Cone angle divided by 2π."""
        return int(round(self.cone_angle / TWO_PI))

    @property
    def corners(self) -> Tuple[CornerRef, ...]:
        return tuple(record.corner for record in self.fan)


@dataclass(frozen=True)
class Placement:
    """A polygon copy placed in the plane by a pure translation."""

    polygon_id: int
    offset: Point = (0.0, 0.0)

    def shifted(self, delta: np.ndarray) -> "Placement":
        return Placement(
            self.polygon_id,
            (self.offset[0] + float(delta[0]), self.offset[1] + float(delta[1])),
        )


@dataclass(frozen=True)
class FamilyTag:
    """Which parameterized family a surface was built from."""

    kind: str
    n: int = 0
    m: int = 0
    normalized: bool = True

    @property
    def name(self) -> str:
        if self.kind == "ngon":
            return f"ngon{self.n}"
        if self.kind == "bouw_moller":
            return f"bm-{self.m}-{self.n}"
        return self.kind


CUSTOM_FAMILY = FamilyTag(kind="custom")
