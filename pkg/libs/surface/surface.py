"""Translation surface assembly, corner walks and unfolding primitives."""

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .base import (
    CUSTOM_FAMILY,
    EPS_ANG,
    EPS_LEN,
    TWO_PI,
    CornerRef,
    EdgeRef,
    FamilyTag,
    FanCorner,
    InvalidReferenceError,
    Placement,
    PolygonSpec,
    RayOutsideSectorError,
    SideGluing,
    Singularity,
    SurfaceValidationError,
    direction_angle,
)

logger = structlog.get_logger()


class TranslationSurface:
    """Polygons glued along antiparallel edges, with derived cone points.

    Instances are immutable after construction and safe to share between
    threads.
    """

    def __init__(
        self,
        polygons: Sequence[PolygonSpec],
        gluings: Sequence[SideGluing],
        eps_len: float = EPS_LEN,
        eps_ang: float = EPS_ANG,
        family: FamilyTag = CUSTOM_FAMILY,
    ):
        """Validate the polygons and gluings and derive the singularities."""
        self.family = family
        self.eps_len = eps_len
        self.eps_ang = eps_ang
        ordered = sorted(polygons, key=lambda polygon: polygon.id)
        self._polygons: Dict[int, PolygonSpec] = {}
        for polygon in ordered:
            if polygon.id in self._polygons:
                raise SurfaceValidationError(f"duplicate polygon id {polygon.id}")
            _validate_polygon(polygon, eps_len)
            self._polygons[polygon.id] = polygon

        self._partner: Dict[EdgeRef, EdgeRef] = {}
        self._translation: Dict[EdgeRef, np.ndarray] = {}
        for gluing in gluings:
            self._register_gluing(gluing)
        missing = [
            (pid, edge)
            for pid, polygon in self._polygons.items()
            for edge in range(polygon.size)
            if (pid, edge) not in self._partner
        ]
        if missing:
            raise SurfaceValidationError(f"edges without a partner: {missing}")
        self.gluings: Tuple[SideGluing, ...] = tuple(
            sorted(
                (
                    SideGluing(
                        ref, self._partner[ref], _as_point(self._translation[ref])
                    )
                    for ref in self._partner
                    if ref < self._partner[ref]
                ),
                key=lambda gluing: gluing.first,
            )
        )

        self._corner_owner: Dict[CornerRef, Tuple[int, int]] = {}
        self.singularities: Tuple[Singularity, ...] = self._derive_singularities()
        self.area = float(sum(polygon.area for polygon in self._polygons.values()))
        self.l0 = float(
            min(float(np.min(p.edge_lengths)) for p in self._polygons.values())
        )
        self.genus = self._gauss_bonnet_genus()

    # -- construction helpers -------------------------------------------------

    def _register_gluing(self, gluing: SideGluing) -> None:
        first, second = gluing.first, gluing.second
        for ref in (first, second):
            self._check_edge(ref)
            if ref in self._partner:
                raise SurfaceValidationError(f"edge {ref} glued twice")
        if first == second:
            raise SurfaceValidationError(f"edge {first} glued to itself")

        first_vector = self._polygons[first[0]].edges[first[1]]
        second_vector = self._polygons[second[0]].edges[second[1]]
        scale = max(1.0, float(np.hypot(*first_vector)))
        if float(np.hypot(*(first_vector + second_vector))) > self.eps_len * scale:
            raise SurfaceValidationError(
                f"edges {first} and {second} are not antiparallel of equal length"
            )

        # v_first maps onto w_{second + 1}
        origin = self._polygons[first[0]].vertex(first[1])
        image = self._polygons[second[0]].vertex(second[1] + 1)
        translation = image - origin
        declared = gluing.translation
        if declared is not None and float(
            np.hypot(*(np.asarray(declared, dtype=float) - translation))
        ) > self.eps_len * scale:
            raise SurfaceValidationError(
                f"gluing {first}-{second} declares translation {tuple(declared)}, "
                f"the vertices give {_as_point(translation)}"
            )
        self._partner[first] = second
        self._partner[second] = first
        self._translation[first] = translation
        self._translation[second] = -translation

    def _derive_singularities(self) -> Tuple[Singularity, ...]:
        corners = sorted(
            (pid, vertex)
            for pid, polygon in self._polygons.items()
            for vertex in range(polygon.size)
        )
        seen: Dict[CornerRef, bool] = {}
        singularities: List[Singularity] = []
        for corner in corners:
            if corner in seen:
                continue
            fan: List[FanCorner] = []
            total = 0.0
            current = corner
            while True:
                if current in seen:
                    raise SurfaceValidationError(
                        f"corner walk from {corner} does not close cleanly"
                    )
                seen[current] = True
                polygon = self._polygons[current[0]]
                angle = polygon.interior_angle(current[1])
                fan.append(
                    FanCorner(
                        polygon_id=current[0],
                        vertex=current[1],
                        start=total,
                        angle=angle,
                        direction=polygon.edge_direction(current[1]),
                    )
                )
                total += angle
                current = self._next_corner(current)
                if current == corner:
                    break

            order = int(round(total / TWO_PI))
            if order < 1 or abs(total - order * TWO_PI) > self.eps_ang * max(
                1, len(fan)
            ):
                raise SurfaceValidationError(
                    f"cone angle {total!r} at corner {corner} is not a multiple of 2π"
                )
            sid = len(singularities)
            for index, record in enumerate(fan):
                self._corner_owner[record.corner] = (sid, index)
            singularities.append(
                Singularity(id=sid, cone_angle=order * TWO_PI, fan=tuple(fan))
            )
        return tuple(singularities)

    def _next_corner(self, corner: CornerRef) -> CornerRef:
        """Next corner counter-clockwise around the same vertex class."""
        pid, vertex = corner
        size = self._polygons[pid].size
        return self._partner[(pid, (vertex - 1) % size)]

    def _gauss_bonnet_genus(self) -> int:
        excess = sum(s.order - 1 for s in self.singularities)
        if excess % 2 != 0:
            raise SurfaceValidationError(
                f"Gauss-Bonnet excess {excess} is odd; surface is inconsistent"
            )
        genus = excess // 2 + 1
        logger.debug(
            "surface_built",
            polygons=len(self._polygons),
            singularities=len(self.singularities),
            genus=genus,
            area=self.area,
        )
        return genus

    def _check_edge(self, ref: EdgeRef) -> None:
        pid, edge = ref
        if pid not in self._polygons:
            raise InvalidReferenceError(f"unknown polygon {pid}")
        if not 0 <= edge < self._polygons[pid].size:
            raise InvalidReferenceError(f"polygon {pid} has no edge {edge}")

    # -- accessors -------------------------------------------------------------

    @property
    def polygons(self) -> Tuple[PolygonSpec, ...]:
        return tuple(self._polygons.values())

    @property
    def polygon_ids(self) -> Tuple[int, ...]:
        return tuple(self._polygons)

    def polygon(self, polygon_id: int) -> PolygonSpec:
        try:
            return self._polygons[polygon_id]
        except KeyError:
            raise InvalidReferenceError(f"unknown polygon {polygon_id}") from None

    def partner(self, ref: EdgeRef) -> EdgeRef:
        self._check_edge(ref)
        return self._partner[ref]

    def translation(self, ref: EdgeRef) -> np.ndarray:
        """Vector carrying points of edge ``ref`` onto its partner edge."""
        self._check_edge(ref)
        return self._translation[ref]

    def canonical_edge(self, ref: EdgeRef) -> EdgeRef:
        """The smaller of an edge and its partner; one representative per gluing."""
        return min(ref, self.partner(ref))

    def label(self, ref: EdgeRef) -> str:
        return self.polygon(ref[0]).labels[ref[1]]

    def edge_refs(self) -> Iterable[EdgeRef]:
        for pid, polygon in self._polygons.items():
            for edge in range(polygon.size):
                yield (pid, edge)

    @property
    def max_diameter(self) -> float:
        return max(polygon.diameter for polygon in self._polygons.values())

    def singularity(self, singularity_id: int) -> Singularity:
        if not 0 <= singularity_id < len(self.singularities):
            raise InvalidReferenceError(f"unknown singularity {singularity_id}")
        return self.singularities[singularity_id]

    def fan_position(self, polygon_id: int, vertex: int) -> Tuple[int, int]:
        """Return ``(singularity id, index in fan)`` of a corner."""
        polygon = self.polygon(polygon_id)
        if not 0 <= vertex < polygon.size:
            raise InvalidReferenceError(f"polygon {polygon_id} has no vertex {vertex}")
        return self._corner_owner[(polygon_id, vertex)]

    def corner_walk(self, polygon_id: int, vertex: int) -> Singularity:
        """Return the singularity whose fan contains the corner."""
        sid, _ = self.fan_position(polygon_id, vertex)
        return self.singularities[sid]

    def fan_corner(self, polygon_id: int, vertex: int) -> FanCorner:
        sid, index = self.fan_position(polygon_id, vertex)
        return self.singularities[sid].fan[index]

    def angular_coordinate(
        self,
        singularity: Singularity,
        corner: CornerRef,
        ray: np.ndarray,
    ) -> float:
        """Angular coordinate in [0, cone angle) of a ray leaving ``corner``.

        The ray must point into the corner's sector, boundary rays included.
        """
        sid, index = self.fan_position(*corner)
        if sid != singularity.id:
            raise InvalidReferenceError(
                f"corner {corner} does not belong to singularity {singularity.id}"
            )
        record = singularity.fan[index]
        heading = direction_angle(np.asarray(ray, dtype=float))
        offset = (heading - record.direction) % TWO_PI
        if offset > TWO_PI - self.eps_ang:
            offset = 0.0
        if offset > record.angle + self.eps_ang:
            raise RayOutsideSectorError(
                f"ray at offset {offset:.12f} leaves corner {corner} "
                f"of angle {record.angle:.12f}"
            )
        coordinate = record.start + min(offset, record.angle)
        if coordinate >= singularity.cone_angle - self.eps_ang:
            coordinate = 0.0
        return coordinate

    def ray_direction(
        self, singularity: Singularity, coordinate: float
    ) -> Tuple[FanCorner, float]:
        """Inverse of :meth:`angular_coordinate`: the corner and absolute direction."""
        coordinate = coordinate % singularity.cone_angle
        for record in singularity.fan:
            if record.start - self.eps_ang <= coordinate < record.end - self.eps_ang:
                return record, (record.direction + coordinate - record.start) % TWO_PI
        last = singularity.fan[-1]
        return last, (last.direction + coordinate - last.start) % TWO_PI

    def develop_across(self, placement: Placement, edge: int) -> Placement:
        """Place the polygon glued to ``edge`` so the shared edge coincides."""
        ref = (placement.polygon_id, edge)
        partner = self.partner(ref)
        return Placement(partner[0], placement.offset).shifted(-self._translation[ref])

    def placed_vertices(self, placement: Placement) -> np.ndarray:
        polygon = self.polygon(placement.polygon_id)
        return polygon.translated(np.asarray(placement.offset))

    def locate_edge(
        self, polygon_id: int, point: np.ndarray, tol: Optional[float] = None
    ) -> Optional[int]:
        """Edge of the polygon containing ``point`` (native coordinates), if any."""
        tol = self.eps_len * 10 if tol is None else tol
        polygon = self.polygon(polygon_id)
        for edge in range(polygon.size):
            start = polygon.vertex(edge)
            vector = polygon.edges[edge]
            length = polygon.edge_lengths[edge]
            rel = np.asarray(point, dtype=float) - start
            distance = abs(vector[0] * rel[1] - vector[1] * rel[0]) / length
            along = float(np.dot(rel, vector)) / (length * length)
            if distance <= tol and -tol <= along * length <= length + tol:
                return edge
        return None

    def scaled(self, factor: float) -> "TranslationSurface":
        """Return a copy with every coordinate multiplied by ``factor``."""
        polygons = [
            PolygonSpec(
                id=polygon.id,
                vertices=tuple(_as_point(p * factor) for p in polygon.points),
                labels=polygon.labels,
            )
            for polygon in self._polygons.values()
        ]
        gluings = [
            SideGluing(
                g.first, g.second, _as_point(self._translation[g.first] * factor)
            )
            for g in self.gluings
        ]
        return TranslationSurface(
            polygons, gluings, self.eps_len, self.eps_ang, family=self.family
        )

    def cone_signature(self) -> List[Tuple[int, int]]:
        """Sorted (cone angle order, fan size) pairs; independent of polygon order."""
        return sorted((s.order, len(s.fan)) for s in self.singularities)


def _validate_polygon(polygon: PolygonSpec, eps_len: float) -> None:
    if polygon.size < 3:
        raise SurfaceValidationError(f"polygon {polygon.id} has fewer than 3 vertices")
    if len(polygon.labels) != polygon.size:
        raise SurfaceValidationError(
            f"polygon {polygon.id} has {len(polygon.labels)} labels "
            f"for {polygon.size} edges"
        )
    if polygon.area <= 0.0:
        raise SurfaceValidationError(
            f"polygon {polygon.id} is not listed counter-clockwise"
        )
    if float(np.min(polygon.edge_lengths)) <= eps_len:
        raise SurfaceValidationError(f"polygon {polygon.id} has a degenerate edge")
    edges = polygon.edges
    turns = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(
        edges, -1, axis=0
    )[:, 0]
    if np.any(turns <= eps_len):
        raise SurfaceValidationError(f"polygon {polygon.id} is not strictly convex")
    total_turn = sum(
        math.atan2(
            float(turns[i]),
            float(np.dot(edges[i], edges[(i + 1) % polygon.size])),
        )
        for i in range(polygon.size)
    )
    if abs(total_turn - TWO_PI) > 1e-6:
        raise SurfaceValidationError(f"polygon {polygon.id} is not simple")


def _as_point(vector: np.ndarray) -> Tuple[float, float]:
    return (float(vector[0]), float(vector[1]))


def build_surface(
    polygons: Sequence[PolygonSpec],
    gluings: Iterable[Tuple[EdgeRef, EdgeRef]],
    eps_len: float = EPS_LEN,
    eps_ang: float = EPS_ANG,
    family: FamilyTag = CUSTOM_FAMILY,
) -> TranslationSurface:
    """Build a surface from polygons and unordered edge pairs.

    Translations are derived from the polygon coordinates.
    """
    sides = [
        SideGluing((int(a[0]), int(a[1])), (int(b[0]), int(b[1])))
        for a, b in gluings
    ]
    return TranslationSurface(
        polygons, sides, eps_len=eps_len, eps_ang=eps_ang, family=family
    )
