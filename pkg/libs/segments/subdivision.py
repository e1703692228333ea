"""Sandwiched/non-sandwiched decomposition of saddle connections on the n-gon."""

import math
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from libs.geodesics import Crossing, SaddleConnection
from libs.surface import TranslationSurface

from .base import (
    INITIAL,
    NON_SANDWICHED,
    SANDWICHED,
    TERMINAL,
    Decomposition,
    Sector,
    Segment,
    SegmentCounts,
    TransitionDiagram,
    Trip,
    TripSummary,
)
from .sectors import SectorDiagrams, sector_index

logger = structlog.get_logger()

EPS_0 = 2.0 * math.cos(math.pi / 10.0) - math.sqrt(2.0)
EPS_1 = math.sqrt(2.0) - 1.0
# Longest diagonal of the unit decagon is 1/sin(π/10) = 1 + √5, slightly
# below the 3√2 - 1 that makes the type-3 bound sharp.
DECAGON_LONG_DIAGONAL = 1.0 + math.sqrt(5.0)
DECAGON_LONG_DIAGONAL_STATED = 3.0 * math.sqrt(2.0) - 1.0
EPS_1_EFFECTIVE = DECAGON_LONG_DIAGONAL - 2.0 * math.sqrt(2.0)

LENGTH_TOL = 1e-7


def _single_segment(
    sc: SaddleConnection, n: int
) -> Tuple[List[Segment], TripSummary]:
    segment = Segment(
        index=0,
        kind=NON_SANDWICHED,
        start=None,
        end=None,
        interior=(),
        start_position=0.0,
        end_position=1.0,
        length=sc.length,
    )
    trips = TripSummary()
    if is_short_diagonal(sc, n):
        trip = Trip(
            first=0,
            last=0,
            p=1,
            q=0,
            length=sc.length,
            starts_at_vertex=True,
            ends_at_vertex=True,
        )
        trips = TripSummary((trip,))
    return [segment], trips


def is_short_diagonal(sc: SaddleConnection, n: int) -> bool:
    return (
        not sc.crossings
        and not sc.is_side
        and abs(sc.length - 2.0 * math.cos(math.pi / n)) <= LENGTH_TOL
    )


def is_longest_diagonal(sc: SaddleConnection, n: int) -> bool:
    return not sc.crossings and abs(sc.length - 1.0 / math.sin(math.pi / n)) <= (
        LENGTH_TOL
    )


def _is_short(segment: Segment, diagram: TransitionDiagram) -> bool:
    if segment.kind == SANDWICHED:
        return True
    second = diagram.sigma[1]
    return any(c.label == second for c in (segment.start, segment.end) if c)


def _trips(segments: Sequence[Segment], diagram: TransitionDiagram) -> TripSummary:
    short = [_is_short(segment, diagram) for segment in segments]
    trips: List[Trip] = []
    index = 0
    while index < len(segments):
        if not short[index]:
            index += 1
            continue
        first = index
        while index + 1 < len(segments) and short[index + 1]:
            index += 1
        last = index
        # the long segment right before the run enters the short cylinder
        if first > 0:
            first -= 1
        members = segments[first : last + 1]
        trips.append(
            Trip(
                first=first,
                last=last,
                p=len(members),
                q=sum(1 for s in members if s.kind == SANDWICHED),
                length=sum(s.length for s in members),
                starts_at_vertex=members[0].start is None,
                ends_at_vertex=members[-1].end is None,
            )
        )
        index += 1
    return TripSummary(tuple(trips))


def subdivide(
    surface: TranslationSurface,
    sc: SaddleConnection,
    diagrams: Optional[SectorDiagrams] = None,
) -> Decomposition:
    """Cut ``sc`` at every crossing of a non-sandwiched side of its sector.

    Sides and diagonals form a single segment.
    """
    n = surface.polygons[0].size
    diagrams = diagrams or SectorDiagrams(surface)
    index = sector_index(sc.angle, n)
    sector = None if index is None else Sector(index, n)

    if not sc.crossings or index is None:
        if sc.crossings:
            logger.warning(
                "crossing_connection_on_sector_boundary",
                connection=sc.describe(),
            )
        segments, trips = _single_segment(sc, n)
        return Decomposition(sc, sector, segments, SegmentCounts(1, 1, 0), trips)

    diagram = diagrams[index]
    sandwiched = diagram.sandwiched_label
    cuts: List[Optional[int]] = [
        k for k, crossing in enumerate(sc.crossings) if crossing.label != sandwiched
    ]
    bounds: List[Optional[int]] = [None] + cuts + [None]
    segments: List[Segment] = []
    for position, (a, b) in enumerate(zip(bounds, bounds[1:])):
        lo = -1 if a is None else a
        hi = len(sc.crossings) if b is None else b
        start: Optional[Crossing] = None if a is None else sc.crossings[a]
        end: Optional[Crossing] = None if b is None else sc.crossings[b]
        interior = tuple(sc.crossings[lo + 1 : hi])
        s0 = 0.0 if start is None else start.position
        s1 = 1.0 if end is None else end.position
        if start is None and len(bounds) > 2:
            kind = INITIAL
        elif end is None:
            kind = TERMINAL
        elif interior:
            kind = SANDWICHED
        else:
            kind = NON_SANDWICHED
        segments.append(
            Segment(
                index=position,
                kind=kind,
                start=start,
                end=end,
                interior=interior,
                start_position=s0,
                end_position=s1,
                length=(s1 - s0) * sc.length,
            )
        )

    q = sum(1 for segment in segments if segment.kind == SANDWICHED)
    counts = SegmentCounts(n=len(segments), p=len(segments) - q, q=q)
    return Decomposition(
        sc, sector, segments, counts, _trips(segments, diagram), diagram=diagram
    )


def reassembled_crossings(decomposition: Decomposition) -> Tuple[Crossing, ...]:
    """Crossings read back from the segments; equals the connection's own list."""
    out: List[Crossing] = []
    for segment in decomposition.segments:
        out.extend(segment.interior)
        if segment.end is not None:
            out.append(segment.end)
    return tuple(out)


def trip_bound(p: int, q: int, n: int) -> float:
    """Lower bound on the length of a maximal trip with p segments, q sandwiched."""
    c, s = math.cos(2.0 * math.pi / n), math.sin(2.0 * math.pi / n)
    return math.hypot(p + (p - 1) * c, (q + 1) * s)


def refined_trip_bound(p: int, q: int, n: int) -> float:
    """Trip bound when neither end of the trip sits at a vertex."""
    c, s = math.cos(2.0 * math.pi / n), math.sin(2.0 * math.pi / n)
    return math.hypot(p * (1.0 + c), (q + 1) * s)


def long_segment_bound(n: int) -> float:
    return 2.0 * math.cos(math.pi / n)


def long_segment_check(segment: Segment, diagram: TransitionDiagram) -> bool:
    """Whether a non-sandwiched segment runs between sides of σ-rank at least 3."""
    if segment.kind == SANDWICHED or segment.start is None or segment.end is None:
        return False
    return (
        diagram.rank(segment.start.label) >= 3 and diagram.rank(segment.end.label) >= 3
    )


def delta_holonomies(n: int) -> np.ndarray:
    """Images of (2 + cos 2π/n, sin 2π/n) under the dihedral group of the n-gon."""
    base = np.array([2.0 + math.cos(2.0 * math.pi / n), math.sin(2.0 * math.pi / n)])
    mirrored = np.array([-base[0], base[1]])
    images = []
    for k in range(n):
        angle = 2.0 * math.pi * k / n
        rotation = np.array(
            [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
        )
        images.append(rotation @ base)
        images.append(rotation @ mirrored)
    return np.asarray(images)


def is_delta(surface: TranslationSurface, sc: SaddleConnection) -> bool:
    """Dihedral image of Δ: one crossing, at the midpoint of the side next to
    the starting corner, with the matching holonomy."""
    if len(sc.crossings) != 1:
        return False
    n = surface.polygons[0].size
    distance = np.hypot(*(delta_holonomies(n) - np.asarray(sc.holonomy)).T)
    if float(distance.min()) > LENGTH_TOL:
        return False
    crossing = sc.crossings[0]
    pid, edge = crossing.edge
    polygon = surface.polygon(pid)
    midpoint = polygon.vertex(edge) + 0.5 * polygon.edges[edge]
    if math.hypot(*(np.asarray(crossing.point) - midpoint)) > LENGTH_TOL:
        return False
    vertex = sc.start.corner[1]
    return (edge - vertex) % n in (1, n - 2)


def _corner_labels(surface: TranslationSurface, corner: Tuple[int, int]) -> Set[str]:
    pid, vertex = corner
    polygon = surface.polygon(pid)
    return {polygon.labels[vertex], polygon.labels[(vertex - 1) % polygon.size]}


def in_big_cylinder(
    surface: TranslationSurface,
    sc: SaddleConnection,
    diagram: Optional[TransitionDiagram],
) -> bool:
    """Longest diagonal, or a connection that only crosses σ(n/2 - 1), σ(n/2)
    and joins common endpoints of those two sides."""
    n = surface.polygons[0].size
    if not sc.crossings:
        return is_longest_diagonal(sc, n)
    if diagram is None:
        return False
    outer = {diagram.sigma[-2], diagram.sigma[-1]}
    if not set(sc.cutting_sequence) <= outer:
        return False
    return (
        _corner_labels(surface, sc.start.corner) == outer
        and _corner_labels(surface, sc.end.corner) == outer
    )


def classify_type(
    surface: TranslationSurface,
    sc: SaddleConnection,
    diagrams: Optional[SectorDiagrams] = None,
) -> int:
    """1 side, 2 image of Δ, 3 strictly inside the big cylinder, 4 otherwise."""
    if sc.is_side:
        return 1
    if is_delta(surface, sc):
        return 2
    diagrams = diagrams or SectorDiagrams(surface)
    if in_big_cylinder(surface, sc, diagrams.for_direction(sc.angle)):
        return 3
    return 4


def length_lower_bound(sc_type: int, n_alpha: int, n: int) -> float:
    """Lower bound on the length of a connection of a given type.

    Type 3 uses the effective constant 1 + √5 - 2√2 so the decagon's longest
    diagonal meets it with equality.
    """
    sqrt2 = math.sqrt(2.0)
    if sc_type == 1:
        return 1.0
    if sc_type == 2:
        return math.sqrt(5.0 + 4.0 * math.cos(2.0 * math.pi / n))
    if sc_type == 3:
        return 2.0 * sqrt2 * n_alpha + EPS_1_EFFECTIVE
    return sqrt2 * n_alpha + EPS_0
