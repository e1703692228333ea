"""Polygonal decomposition of saddle connections on Bouw-Moller surfaces."""

import math
from dataclasses import replace
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from libs.builders import BouwMollerLayout, BouwMollerParams
from libs.geodesics import Piece, SaddleConnection
from libs.surface import TranslationSurface

from .base import (
    ADJACENT,
    LONG_CLASSES,
    NO_CLASS,
    NON_ADJACENT,
    NON_SANDWICHED,
    BMDecomposition,
    Segment,
    SegmentCounts,
    SegmentGroup,
    SegmentGroupingError,
)

logger = structlog.get_logger()

# segments are classified and grouped only from this size on
MIN_CLASSIFIED = 8
LENGTH_TOL = 1e-7

# one end of a segment: ("edge", index) or ("vertex", index)
EndRef = Tuple[str, int]


def _layout(surface: TranslationSurface) -> BouwMollerLayout:
    family = surface.family
    if family.kind != "bouw_moller":
        raise ValueError(f"surface family {family.name!r} is not a Bouw-Moller surface")
    return BouwMollerLayout(BouwMollerParams(family.m, family.n, family.normalized))


def _ends(sc: SaddleConnection, piece: Piece) -> Tuple[EndRef, EndRef]:
    """Only the first piece starts and only the last piece ends at a vertex."""
    start: EndRef = (
        ("edge", piece.start_edge)
        if piece.start_edge is not None
        else ("vertex", sc.start.corner[1])
    )
    end: EndRef = (
        ("edge", piece.end_edge)
        if piece.end_edge is not None
        else ("vertex", sc.end.corner[1])
    )
    return start, end


def _sides(ref: EndRef, size: int) -> Tuple[int, ...]:
    kind, index = ref
    if kind == "edge":
        return (index,)
    return ((index - 1) % size, index % size)


def _gap(a: int, b: int, size: int) -> Tuple[int, Tuple[int, ...]]:
    """Sides strictly between a and b along the shorter way round."""
    forward = (b - a) % size
    backward = (a - b) % size
    if forward <= backward:
        between = tuple((a + k) % size for k in range(1, forward))
    else:
        between = tuple((b + k) % size for k in range(1, backward))
    return min(forward, backward) - 1, between


def _separation(start: EndRef, end: EndRef, size: int) -> Tuple[int, Tuple[int, ...]]:
    """Smallest separation between the sides holding the two ends."""
    gaps = [
        _gap(a, b, size) for a in _sides(start, size) for b in _sides(end, size)
    ]
    return min(gaps, key=lambda gap: gap[0])


def _point_to_side(point: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    edge = b - a
    t = float(np.clip(np.dot(point - a, edge) / np.dot(edge, edge), 0.0, 1.0))
    closest = a + t * edge
    return float(math.hypot(*(point - closest)))


class _Classifier:
    """Class (a)-(i) of non-adjacent segments and adjacent pairs, m, n >= 8."""

    def __init__(self, layout: BouwMollerLayout):
        self.layout = layout
        self.m = layout.m
        self.ends = (0, self.m - 1)
        self.next_to_ends = (1, self.m - 2)

    def non_adjacent(
        self, polygon: int, start: EndRef, end: EndRef, size: int
    ) -> Tuple[str, Optional[int]]:
        """Class and supporting side of a non-adjacent segment of P(polygon)."""
        separation, between = _separation(start, end, size)
        if separation < 1:
            return NO_CLASS, None
        if polygon in self.ends:
            return ("e", None) if separation >= 2 else ("h", between[0])
        if polygon in self.next_to_ends:
            if separation >= 2:
                return "d", None
            if self.layout.is_long(polygon, between[0]):
                return "f", None
            return "g", between[0]
        if polygon in (2, self.m - 3) and any(
            self.layout.is_long(polygon, side) for side in between
        ):
            return "c", None
        return "a", None

    def pair(self, first_polygon: int, second_polygon: int) -> str:
        if first_polygon in self.ends or second_polygon in self.ends:
            return "i"
        return "b"


def _adjacent_pairs(segments: Sequence[Segment]) -> List[Tuple[int, int]]:
    """Greedy left-to-right pairing of consecutive adjacent segments."""
    pairs: List[Tuple[int, int]] = []
    index = 0
    while index + 1 < len(segments):
        if (
            segments[index].adjacency == ADJACENT
            and segments[index + 1].adjacency == ADJACENT
        ):
            pairs.append((index, index + 1))
            index += 2
        else:
            index += 1
    return pairs


def bm_length_bound(n_alpha: int) -> float:
    """(√2·n + (√2 - 1))·l0 with unit l0."""
    return math.sqrt(2.0) * n_alpha + (math.sqrt(2.0) - 1.0)


def pair_g_bound(m: int, n: int) -> float:
    cm, cn = math.cos(math.pi / m), math.cos(math.pi / n)
    return 4.0 * cm * cn + 4.0 * cm * cm


def pair_h_bound(m: int, n: int) -> float:
    return 2.0 * math.cos(math.pi / n) + 2.0 * math.cos(math.pi / m)


def is_end_polygon_side(surface: TranslationSurface, sc: SaddleConnection) -> bool:
    """Whether ``sc`` is a side of P(0) or P(m-1)."""
    if sc.side_edge is None:
        return False
    m = surface.family.m
    partner = surface.partner(sc.side_edge)
    return bool({sc.side_edge[0], partner[0]} & {0, m - 1})


def bm_subdivide(
    surface: TranslationSurface, sc: SaddleConnection, strict: bool = False
) -> BMDecomposition:
    """Cut ``sc`` at every side it crosses and group the pieces.

    Counts are computed for every S_{m,n}; class tags and groups only when
    m, n >= 8. With ``strict`` an overlap or a short partner raises
    SegmentGroupingError instead of being recorded in ``findings``.
    """
    layout = _layout(surface)
    m, n = layout.m, layout.n
    classified = m >= MIN_CLASSIFIED and n >= MIN_CLASSIFIED
    classifier = _Classifier(layout)

    segments: List[Segment] = []
    supports: List[Optional[int]] = []
    for step, piece in enumerate(sc.pieces):
        size = surface.polygon(piece.polygon_id).size
        start_ref, end_ref = _ends(sc, piece)
        adjacent = (
            start_ref[0] == "edge"
            and end_ref[0] == "edge"
            and (end_ref[1] - start_ref[1]) % size in (1, size - 1)
        )
        bm_class, support = NO_CLASS, None
        if classified and not adjacent:
            bm_class, support = classifier.non_adjacent(
                piece.polygon_id, start_ref, end_ref, size
            )
        s0 = sc.crossings[step - 1].position if step > 0 else 0.0
        s1 = sc.crossings[step].position if step < len(sc.crossings) else 1.0
        segments.append(
            Segment(
                index=step,
                kind=NON_SANDWICHED,
                start=sc.crossings[step - 1] if step > 0 else None,
                end=sc.crossings[step] if step < len(sc.crossings) else None,
                interior=(),
                start_position=s0,
                end_position=s1,
                length=(s1 - s0) * sc.length,
                polygon_id=piece.polygon_id,
                adjacency=ADJACENT if adjacent else NON_ADJACENT,
                bm_class=bm_class,
            )
        )
        supports.append(support)

    pairs = _adjacent_pairs(segments)
    if classified:
        for a, b in pairs:
            tag = classifier.pair(segments[a].polygon_id, segments[b].polygon_id)
            segments[a] = replace(segments[a], bm_class=tag)
            segments[b] = replace(segments[b], bm_class=tag)

    p = sum(1 for segment in segments if segment.adjacency == NON_ADJACENT)
    counts = SegmentCounts(n=p + len(pairs), p=p, q=len(pairs))
    decomposition = BMDecomposition(
        connection=sc, segments=segments, counts=counts, pairs=pairs, groups=[]
    )
    if classified:
        _group(surface, decomposition, supports, classifier, strict)
    return decomposition


def _report(decomposition: BMDecomposition, message: str, strict: bool) -> None:
    if strict:
        raise SegmentGroupingError(message)
    logger.warning(
        "segment_grouping_finding",
        connection=decomposition.connection.describe(),
        finding=message,
    )
    decomposition.findings.append(message)


def _group(
    surface: TranslationSurface,
    decomposition: BMDecomposition,
    supports: Sequence[Optional[int]],
    classifier: _Classifier,
    strict: bool,
) -> None:
    sc = decomposition.connection
    segments = decomposition.segments
    layout = classifier.layout
    used: Set[int] = set()
    alone: Set[int] = set()
    pair_of = {index: pair for pair in decomposition.pairs for index in pair}

    def is_long_unit(index: int) -> bool:
        if not 0 <= index < len(segments):
            return False
        segment = segments[index]
        return segment.adjacency == NON_ADJACENT and segment.bm_class in LONG_CLASSES

    def claim(members: Tuple[int, ...], units: int, reason: str) -> None:
        overlap = used.intersection(members)
        if overlap:
            _report(
                decomposition,
                f"group {reason} at {members} overlaps segments {sorted(overlap)}",
                strict,
            )
            return
        used.update(members)
        length = sum(segments[index].length for index in members)
        decomposition.groups.append(
            SegmentGroup(tuple(sorted(members)), units, length, reason)
        )

    for segment in segments:
        index = segment.index
        if segment.adjacency != NON_ADJACENT or segment.bm_class not in ("g", "h"):
            continue
        polygon = surface.polygon(sc.pieces[index].polygon_id)
        support = supports[index]
        if support is None:
            continue
        corner_a = polygon.vertex(support)
        corner_b = polygon.vertex(support + 1)
        piece = sc.pieces[index]
        to_start = _point_to_side(np.asarray(piece.start), corner_a, corner_b)
        to_end = _point_to_side(np.asarray(piece.end), corner_a, corner_b)
        start_is_closer = to_start < to_end
        if segment.bm_class == "g":
            partner = index - 1 if start_is_closer else index + 1
        else:
            partner = index + 1 if start_is_closer else index - 1
        if not 0 <= partner < len(segments):
            # the pairing side ends at a singularity; a lone segment keeps
            # the one-unit bound only when it is the whole connection
            if len(segments) > 1:
                alone.add(index)
            continue
        if not is_long_unit(partner):
            _report(
                decomposition,
                f"class {segment.bm_class} segment {index} pairs with {partner}, "
                "which is not a long segment",
                strict,
            )
            continue
        claim((index, partner), 2, segment.bm_class)
        bound = (
            pair_g_bound(layout.m, layout.n)
            if segment.bm_class == "g"
            else pair_h_bound(layout.m, layout.n)
        )
        combined = segment.length + segments[partner].length
        if combined < bound - LENGTH_TOL:
            _report(
                decomposition,
                f"class {segment.bm_class} pair ({index}, {partner}) has length "
                f"{combined:.9f} below {bound:.9f}",
                strict,
            )

    for a, b in decomposition.pairs:
        if segments[a].bm_class != "i":
            continue
        in_end = segments[b].polygon_id in classifier.ends
        partner = b + 1 if in_end else a - 1
        if not 0 <= partner < len(segments):
            alone.add(a)
            continue
        if not is_long_unit(partner):
            _report(
                decomposition,
                f"class i pair ({a}, {b}) groups with {partner}, "
                "which is not a long segment",
                strict,
            )
            continue
        claim((a, b, partner), 2, "i")

    for segment in segments:
        index = segment.index
        if index in used:
            continue
        if segment.adjacency == NON_ADJACENT:
            claim((index,), 1, segment.bm_class)
        elif index in pair_of and pair_of[index][0] == index:
            claim(pair_of[index], 1, segment.bm_class)

    for group in decomposition.groups:
        if group.reason == NO_CLASS or group.members[0] in alone:
            continue
        bound = bm_length_bound(group.units)
        if group.length < bound - LENGTH_TOL:
            _report(
                decomposition,
                f"group {group.members} ({group.reason}) has length "
                f"{group.length:.9f} below {bound:.9f}",
                strict,
            )


def is_odd_saddle_connection(
    decomposition: BMDecomposition, allow_zero: bool = False
) -> bool:
    """Whether consecutive non-adjacent segments are always separated by an
    odd number of adjacent ones (``allow_zero`` also accepts no separation).

    Fewer than two non-adjacent segments leave no separation to be odd.
    """
    positions = [
        segment.index
        for segment in decomposition.segments
        if segment.adjacency == NON_ADJACENT
    ]
    if len(positions) < 2:
        return False
    for a, b in zip(positions, positions[1:]):
        between = b - a - 1
        if between % 2 == 1:
            continue
        if allow_zero and between == 0:
            continue
        return False
    return True
