"""Saddle connection and cylinder records."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from libs.surface.base import CornerRef, EdgeRef, Point

DEDUP_DECIMALS = 7
DEFAULT_MAX_COPIES = 2_000_000


class EnumerationBudgetError(RuntimeError):
    """Raised when unfolding needs more polygon copies than allowed."""


class NonPeriodicDirectionError(RuntimeError):
    """Raised when a separatrix does not reach a singularity within the bound."""


class CylinderDecompositionError(RuntimeError):
    """Raised when the cylinders found do not account for the surface area."""


@dataclass(frozen=True)
class Endpoint:
    """Singular endpoint of a saddle connection.

    ``coordinate`` is the angular coordinate of the ray leaving the
    singularity along the connection (for the end point: pointing back).
    """

    singularity: int
    coordinate: float
    corner: CornerRef


@dataclass(frozen=True)
class Crossing:
    """Transverse passage through the interior of a glued edge."""

    edge: EdgeRef
    label: str
    position: float
    point: Point


@dataclass(frozen=True)
class Piece:
    """Part of a connection inside one polygon, in native coordinates."""

    polygon_id: int
    start: Point
    end: Point
    start_edge: Optional[int] = None
    end_edge: Optional[int] = None
    on_edge: Optional[int] = None


@dataclass(frozen=True)
class SaddleConnection:
    """Oriented geodesic segment joining two singularities."""

    start: Endpoint
    end: Endpoint
    holonomy: Point
    length: float
    angle: float
    crossings: Tuple[Crossing, ...] = ()
    pieces: Tuple[Piece, ...] = field(default=(), repr=False)
    side_edge: Optional[EdgeRef] = None

    @property
    def cutting_sequence(self) -> Tuple[str, ...]:
        return tuple(crossing.label for crossing in self.crossings)

    @property
    def is_side(self) -> bool:
        return self.side_edge is not None

    @property
    def is_closed(self) -> bool:
        return self.start.singularity == self.end.singularity

    @property
    def key(self) -> Tuple[int, int, float, float, Tuple[str, ...]]:
        hx = round(self.holonomy[0], DEDUP_DECIMALS) + 0.0
        hy = round(self.holonomy[1], DEDUP_DECIMALS) + 0.0
        return (
            self.start.singularity,
            self.end.singularity,
            hx,
            hy,
            self.cutting_sequence,
        )

    @property
    def sort_key(self) -> Tuple[float, float, int, int, Tuple[str, ...], float]:
        return (
            round(self.length, 9),
            round(self.angle, 9),
            self.start.singularity,
            self.end.singularity,
            self.cutting_sequence,
            round(self.start.coordinate, 9),
        )

    def describe(self) -> str:
        seq = "".join(f"[{label}]" for label in self.cutting_sequence) or "-"
        return (
            f"z{self.start.singularity}->z{self.end.singularity} "
            f"({self.holonomy[0]:.6f},{self.holonomy[1]:.6f}) {seq}"
        )


@dataclass(frozen=True)
class Cylinder:
    """Maximal flat cylinder of closed leaves in a periodic direction."""

    direction: float
    circumference: float
    height: float
    bottom: Tuple[int, ...]
    top: Tuple[int, ...]
    core: Tuple[Piece, ...] = field(default=(), repr=False)

    @property
    def area(self) -> float:
        return self.circumference * self.height

    @property
    def modulus(self) -> float:
        return self.height / self.circumference


@dataclass(frozen=True)
class CylinderDecomposition:
    """Cylinders of one direction plus the saddle connections bounding them.

    ``bottom``/``top`` of each cylinder index into ``connections``.
    """

    direction: float
    connections: Tuple[SaddleConnection, ...]
    cylinders: Tuple[Cylinder, ...]

    @property
    def total_area(self) -> float:
        return sum(cylinder.area for cylinder in self.cylinders)
