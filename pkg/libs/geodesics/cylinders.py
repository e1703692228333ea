"""Cylinder decomposition in periodic directions."""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from libs.surface import (
    EPS_ANG,
    EPS_LEN,
    TWO_PI,
    TranslationSurface,
    cross2,
    direction_angle,
)

from .base import (
    Cylinder,
    CylinderDecomposition,
    CylinderDecompositionError,
    NonPeriodicDirectionError,
    Piece,
    SaddleConnection,
)
from .connections import build_connection, crossing_pieces, side_connection
from .flow import FlowTrace, trace_ray

logger = structlog.get_logger()


class _Barriers:
    """Saddle connection pieces per polygon, for flow hit tests."""

    def __init__(
        self, surface: TranslationSurface, connections: List[SaddleConnection]
    ):
        self.segments: Dict[int, List[Tuple[np.ndarray, np.ndarray, int]]] = (
            defaultdict(list)
        )
        for index, sc in enumerate(connections):
            for piece in crossing_pieces(surface, sc):
                self.segments[piece.polygon_id].append(
                    (np.asarray(piece.start), np.asarray(piece.end), index)
                )
        self.last_hit: Optional[int] = None

    def __call__(
        self, polygon_id: int, a: np.ndarray, b: np.ndarray
    ) -> Optional[float]:
        direction = b - a
        span = math.hypot(direction[0], direction[1])
        if span == 0.0:
            return None
        unit = direction / span
        best: Optional[float] = None
        for p, q, index in self.segments.get(polygon_id, ()):
            edge = q - p
            denom = cross2(unit, edge)
            if abs(denom) < 1e-14:
                continue
            rel = p - a
            s = cross2(rel, edge) / denom
            t = cross2(rel, unit) / denom
            if 1e-9 < s <= span + 1e-9 and -1e-9 <= t <= 1.0 + 1e-9:
                if best is None or s < best:
                    best = s
                    self.last_hit = index
        return best


def _separatrices(
    surface: TranslationSurface,
    direction: float,
    search_bound: float,
    eps_ang: float,
) -> List[SaddleConnection]:
    unit = np.array([math.cos(direction), math.sin(direction)])
    found: List[SaddleConnection] = []
    for singularity in surface.singularities:
        for record in singularity.fan:
            offset = (direction - record.direction) % TWO_PI
            if offset > TWO_PI - eps_ang:
                offset = 0.0
            if offset >= record.angle - eps_ang:
                continue
            pid, vertex = record.corner
            if offset <= eps_ang:
                found.append(side_connection(surface, pid, vertex))
                continue
            start = surface.polygon(pid).vertex(vertex)
            trace = trace_ray(surface, pid, start, unit, search_bound)
            if trace.stop != "vertex" or trace.vertex is None:
                raise NonPeriodicDirectionError(
                    f"separatrix from corner {record.corner} in direction "
                    f"{direction:.9f} does not reach a singularity within "
                    f"{search_bound}"
                )
            found.append(
                build_connection(surface, record.corner, trace.exits, trace.vertex)
            )
    return found


def _longest_piece(pieces: Tuple[Piece, ...]) -> Piece:
    return max(
        pieces,
        key=lambda piece: math.hypot(
            piece.end[0] - piece.start[0], piece.end[1] - piece.start[1]
        ),
    )


@dataclass
class _Side:
    key: Tuple
    height: float
    circumference: float
    core: Tuple[Piece, ...]


def _leaf_key(surface: TranslationSurface, trace: FlowTrace) -> Tuple:
    crossings = []
    for step in trace.steps:
        if step.exit_edge is None:
            continue
        polygon = surface.polygon(step.polygon_id)
        start = polygon.vertex(step.exit_edge)
        vector = polygon.edges[step.exit_edge]
        offset = np.asarray(step.end) - start
        t = float(np.dot(offset, vector) / np.dot(vector, vector))
        crossings.append((step.polygon_id, step.exit_edge, round(t, 6)))
    return tuple(sorted(crossings))


def _measure_side(
    surface: TranslationSurface,
    barriers: _Barriers,
    sc: SaddleConnection,
    left: bool,
    direction: float,
    search_bound: float,
) -> _Side:
    """Measure the cylinder on one side of a boundary saddle connection."""
    pieces = crossing_pieces(surface, sc)
    piece = pieces[0] if left or sc.side_edge is None else pieces[1]
    if sc.side_edge is None:
        piece = _longest_piece(sc.pieces)
    unit = np.array([math.cos(direction), math.sin(direction)])
    normal = np.array([-unit[1], unit[0]]) * (1.0 if left else -1.0)
    mid = (np.asarray(piece.start) + np.asarray(piece.end)) / 2.0

    across = trace_ray(
        surface, piece.polygon_id, mid, normal, search_bound, barrier=barriers
    )
    if across.stop not in ("barrier", "vertex"):
        raise NonPeriodicDirectionError(
            f"no opposite boundary found within {search_bound} in direction "
            f"{direction:.9f}"
        )
    height = across.length
    halfway = trace_ray(surface, piece.polygon_id, mid, normal, height / 2.0)
    # off any glued edge, so the return is seen in the same polygon
    nudge = trace_ray(
        surface, halfway.end_polygon, halfway.end_point, unit, 1e-3 * surface.l0
    )
    core_polygon, core_point = nudge.end_polygon, nudge.end_point
    leaf = trace_ray(
        surface,
        core_polygon,
        core_point,
        unit,
        search_bound,
        closing_point=(core_polygon, core_point),
    )
    if leaf.stop != "closed":
        raise NonPeriodicDirectionError(
            f"leaf in direction {direction:.9f} does not close within {search_bound}"
        )
    core = tuple(
        Piece(polygon_id=step.polygon_id, start=step.start, end=step.end)
        for step in leaf.steps
    )
    return _Side(_leaf_key(surface, leaf), height, leaf.length, core)


def cylinder_decomposition(
    surface: TranslationSurface,
    direction: float,
    search_bound: Optional[float] = None,
    eps_len: float = EPS_LEN,
    eps_ang: float = EPS_ANG,
) -> CylinderDecomposition:
    """Cylinders in a periodic direction, with their boundary saddle connections.

    Raises NonPeriodicDirectionError when a separatrix or a leaf fails to
    close within ``search_bound``.
    """
    direction = direction % TWO_PI
    if search_bound is None:
        search_bound = 50.0 * surface.max_diameter * max(1, len(surface.polygons))
    connections = _separatrices(surface, direction, search_bound, eps_ang)
    barriers = _Barriers(surface, connections)

    sides: Dict[Tuple, _Side] = {}
    bottoms: Dict[Tuple, List[int]] = defaultdict(list)
    tops: Dict[Tuple, List[int]] = defaultdict(list)
    for index, sc in enumerate(connections):
        for left in (True, False):
            side = _measure_side(surface, barriers, sc, left, direction, search_bound)
            known = sides.setdefault(side.key, side)
            if abs(known.height - side.height) > 1e-7:
                logger.warning(
                    "cylinder_height_mismatch",
                    direction=direction,
                    first=known.height,
                    second=side.height,
                )
            (bottoms if left else tops)[side.key].append(index)

    cylinders = [
        Cylinder(
            direction=direction,
            circumference=side.circumference,
            height=side.height,
            bottom=tuple(sorted(bottoms[key])),
            top=tuple(sorted(tops[key])),
            core=side.core,
        )
        for key, side in sorted(sides.items(), key=lambda item: item[0])
    ]
    cylinders.sort(key=lambda c: (round(c.circumference, 9), round(c.height, 9)))
    decomposition = CylinderDecomposition(
        direction, tuple(connections), tuple(cylinders)
    )

    tolerance = 10.0 * eps_len * max(1.0, surface.area)
    if abs(decomposition.total_area - surface.area) > tolerance:
        raise CylinderDecompositionError(
            f"cylinder areas sum to {decomposition.total_area!r}, "
            f"surface area is {surface.area!r}"
        )
    logger.info(
        "cylinders_found",
        direction=round(direction, 9),
        cylinders=len(cylinders),
        boundary_connections=len(connections),
    )
    return decomposition


def _clip(
    points: List[np.ndarray], normal: np.ndarray, level: float, above: bool
) -> List[np.ndarray]:
    sign = 1.0 if above else -1.0
    kept: List[np.ndarray] = []
    count = len(points)
    for index in range(count):
        current, following = points[index], points[(index + 1) % count]
        a = sign * (float(np.dot(normal, current)) - level)
        b = sign * (float(np.dot(normal, following)) - level)
        if a >= 0.0:
            kept.append(current)
        if (a >= 0.0) != (b >= 0.0):
            kept.append(current + (a / (a - b)) * (following - current))
    return kept


def cylinder_regions(
    surface: TranslationSurface, decomposition: CylinderDecomposition
) -> Dict[int, List[Tuple[int, np.ndarray]]]:
    """Per polygon, the bands cut out by the decomposition and the cylinder of each."""
    direction = decomposition.direction
    unit = np.array([math.cos(direction), math.sin(direction)])
    normal = np.array([-unit[1], unit[0]])
    barriers = _Barriers(surface, list(decomposition.connections))
    owner: Dict[int, int] = {}
    for cyl_index, cylinder in enumerate(decomposition.cylinders):
        for sc_index in cylinder.bottom:
            owner[sc_index] = cyl_index

    regions: Dict[int, List[Tuple[int, np.ndarray]]] = {}
    for polygon in surface.polygons:
        levels = [float(np.dot(normal, p)) for p in polygon.points]
        for start, _, _ in barriers.segments.get(polygon.id, ()):
            levels.append(float(np.dot(normal, start)))
        levels = sorted(levels)
        cuts = [levels[0]]
        for level in levels[1:]:
            if level - cuts[-1] > 1e-9:
                cuts.append(level)
        bands: List[Tuple[int, np.ndarray]] = []
        for low, high in zip(cuts, cuts[1:]):
            shape = _clip(list(polygon.points), normal, low, above=True)
            shape = _clip(shape, normal, high, above=False)
            if len(shape) < 3:
                continue
            centre = np.mean(shape, axis=0)
            barriers.last_hit = None
            downward = trace_ray(
                surface,
                polygon.id,
                centre,
                -normal,
                2.0 * surface.max_diameter * len(surface.polygons) + 1.0,
                barrier=barriers,
            )
            if downward.stop != "barrier" or barriers.last_hit not in owner:
                continue
            bands.append((owner[barriers.last_hit], np.asarray(shape)))
        regions[polygon.id] = bands
    return regions


def side_directions(
    surface: TranslationSurface, eps_ang: float = EPS_ANG
) -> List[float]:
    """Distinct side directions in [0, π), the usual periodic candidates."""
    angles = sorted(
        direction_angle(edge) % math.pi
        for polygon in surface.polygons
        for edge in polygon.edges
    )
    out: List[float] = []
    for angle in angles:
        # glued sides are antiparallel, so a direction near π also shows up near 0
        if math.pi - angle <= eps_ang:
            continue
        if not out or angle - out[-1] > eps_ang:
            out.append(angle)
    return out
