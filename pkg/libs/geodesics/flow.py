"""Straight-line flow on a translation surface."""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from libs.surface import EPS_LEN, TranslationSurface, cross2

# (polygon id, start, end) -> distance along the step to the first barrier, if any
BarrierTest = Callable[[int, np.ndarray, np.ndarray], Optional[float]]


@dataclass(frozen=True)
class FlowStep:
    """Straight piece of a trajectory inside one polygon."""

    polygon_id: int
    start: Tuple[float, float]
    end: Tuple[float, float]
    exit_edge: Optional[int]


@dataclass
class FlowTrace:
    """Result of following a ray.

    ``stop`` is ``"vertex"``, ``"barrier"``, ``"closed"`` or ``"limit"``.
    """

    steps: List[FlowStep] = field(default_factory=list)
    length: float = 0.0
    stop: str = "limit"
    vertex: Optional[int] = None

    @property
    def exits(self) -> List[int]:
        return [step.exit_edge for step in self.steps if step.exit_edge is not None]

    @property
    def end_polygon(self) -> int:
        return self.steps[-1].polygon_id

    @property
    def end_point(self) -> np.ndarray:
        return np.asarray(self.steps[-1].end)


def _exit(
    surface: TranslationSurface,
    polygon_id: int,
    point: np.ndarray,
    direction: np.ndarray,
    eps: float,
) -> Tuple[float, int]:
    """Distance to the boundary along ``direction`` and the edge hit there."""
    polygon = surface.polygon(polygon_id)
    best_s, best_edge = math.inf, -1
    for edge in range(polygon.size):
        vector = polygon.edges[edge]
        denom = cross2(direction, vector)
        if denom <= 0.0:
            # parallel to or entering across this edge
            continue
        s = cross2(polygon.vertex(edge) - point, vector) / denom
        if eps < s < best_s:
            best_s, best_edge = s, edge
    if best_edge < 0:
        raise RuntimeError(f"ray leaves no edge of polygon {polygon_id}")
    return best_s, best_edge


def _near_vertex(
    surface: TranslationSurface, polygon_id: int, point: np.ndarray, tol: float
) -> Optional[int]:
    polygon = surface.polygon(polygon_id)
    distances = np.hypot(*(polygon.points - point).T)
    index = int(np.argmin(distances))
    return index if distances[index] <= tol else None


def _enter(
    surface: TranslationSurface,
    polygon_id: int,
    point: np.ndarray,
    unit: np.ndarray,
    tol: float,
) -> Tuple[int, np.ndarray]:
    """Move a point on a glued edge the ray leaves through to the partner copy."""
    if _near_vertex(surface, polygon_id, point, tol) is not None:
        return polygon_id, point
    edge = surface.locate_edge(polygon_id, point, tol)
    if edge is None:
        return polygon_id, point
    polygon = surface.polygon(polygon_id)
    if cross2(unit, polygon.edges[edge]) <= tol * polygon.edge_lengths[edge]:
        return polygon_id, point
    ref = (polygon_id, edge)
    return surface.partner(ref)[0], point + surface.translation(ref)


def trace_ray(
    surface: TranslationSurface,
    polygon_id: int,
    point: np.ndarray,
    direction: np.ndarray,
    max_length: float,
    barrier: Optional[BarrierTest] = None,
    closing_point: Optional[Tuple[int, np.ndarray]] = None,
    eps: float = EPS_LEN,
) -> FlowTrace:
    """Follow the straight-line flow from ``point`` (native coordinates).

    Stops at a singularity, at the first barrier hit, when the trajectory
    returns to ``closing_point``, or after ``max_length``.
    A start on a glued edge the ray leaves through is moved to the partner
    polygon first.
    """
    unit = np.asarray(direction, dtype=float)
    unit = unit / math.hypot(unit[0], unit[1])
    current = np.asarray(point, dtype=float)
    trace = FlowTrace()
    vertex_tol = max(eps * 100, 1e-8)
    polygon_id, current = _enter(surface, polygon_id, current, unit, vertex_tol)
    while True:
        s, edge = _exit(surface, polygon_id, current, unit, eps)
        s_cut = s
        stop: Optional[str] = None
        if barrier is not None:
            hit = barrier(polygon_id, current, current + s * unit)
            if hit is not None and hit <= s_cut:
                s_cut, stop = hit, "barrier"
        if closing_point is not None and closing_point[0] == polygon_id:
            target = closing_point[1]
            rel = target - current
            along = float(np.dot(rel, unit))
            if eps < along <= s_cut + eps and abs(cross2(unit, rel)) <= vertex_tol:
                s_cut, stop = along, "closed"
        if trace.length + s_cut > max_length:
            s_cut, stop = max_length - trace.length, "limit"

        end = current + s_cut * unit
        trace.length += s_cut
        exit_edge = edge if stop is None else None
        trace.steps.append(
            FlowStep(
                polygon_id,
                (float(current[0]), float(current[1])),
                (float(end[0]), float(end[1])),
                exit_edge,
            )
        )
        if stop is not None:
            trace.stop = stop
            return trace
        hit_vertex = _near_vertex(surface, polygon_id, end, vertex_tol)
        if hit_vertex is not None:
            trace.steps[-1] = FlowStep(
                polygon_id, trace.steps[-1].start, trace.steps[-1].end, None
            )
            trace.stop = "vertex"
            trace.vertex = hit_vertex
            return trace
        current = end + surface.translation((polygon_id, edge))
        polygon_id = surface.partner((polygon_id, edge))[0]
