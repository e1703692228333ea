"""Assembling saddle connection records from unfolding chains."""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from libs.surface import Placement, TranslationSurface, cross2, direction_angle
from libs.surface.base import CornerRef

from .base import DEDUP_DECIMALS, Crossing, Endpoint, Piece, SaddleConnection


def _point(vector: np.ndarray) -> Tuple[float, float]:
    return (float(vector[0]), float(vector[1]))


def _chord_parameter(holonomy: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Parameter s with s·holonomy on the line through a and b."""
    edge = b - a
    return cross2(a, edge) / cross2(holonomy, edge)


def build_connection(
    surface: TranslationSurface,
    corner: CornerRef,
    exits: Sequence[int],
    end_vertex: int,
) -> SaddleConnection:
    """Saddle connection leaving ``corner`` through the edges ``exits``.

    The chain of polygon copies starts with the corner's polygon and crosses
    ``exits[t]`` out of copy ``t``; it ends at vertex ``end_vertex`` of the
    last copy. A side traversed against its edge orientation is rebuilt from
    the partner edge so every side lives where its orientation agrees.
    """
    pid, vertex = corner
    polygon = surface.polygon(pid)
    if not exits and (end_vertex - vertex) % polygon.size == polygon.size - 1:
        partner = surface.partner((pid, (vertex - 1) % polygon.size))
        partner_size = surface.polygon(partner[0]).size
        end = (partner[1] + 1) % partner_size
        return build_connection(surface, partner, (), end)

    origin = polygon.vertex(vertex)
    placements = [Placement(pid, (-float(origin[0]), -float(origin[1])))]
    for edge in exits:
        placements.append(surface.develop_across(placements[-1], edge))

    last = placements[-1]
    last_polygon = surface.polygon(last.polygon_id)
    holonomy = last_polygon.vertex(end_vertex) + np.asarray(last.offset)
    length = float(math.hypot(holonomy[0], holonomy[1]))

    crossings: List[Crossing] = []
    params: List[float] = []
    for step, edge in enumerate(exits):
        placement = placements[step]
        offset = np.asarray(placement.offset)
        step_polygon = surface.polygon(placement.polygon_id)
        a = step_polygon.vertex(edge) + offset
        b = step_polygon.vertex(edge + 1) + offset
        s = _chord_parameter(holonomy, a, b)
        params.append(s)
        crossings.append(
            Crossing(
                edge=(placement.polygon_id, edge),
                label=surface.label((placement.polygon_id, edge)),
                position=s,
                point=_point(s * holonomy - offset),
            )
        )

    side_edge = None
    if not exits and (end_vertex - vertex) % polygon.size == 1:
        side_edge = (pid, vertex)

    pieces: List[Piece] = []
    for step, placement in enumerate(placements):
        offset = np.asarray(placement.offset)
        s0 = params[step - 1] if step > 0 else 0.0
        s1 = params[step] if step < len(exits) else 1.0
        entry = None
        if step > 0:
            previous = placements[step - 1].polygon_id
            entry = surface.partner((previous, exits[step - 1]))[1]
        pieces.append(
            Piece(
                polygon_id=placement.polygon_id,
                start=_point(s0 * holonomy - offset),
                end=_point(s1 * holonomy - offset),
                start_edge=entry,
                end_edge=exits[step] if step < len(exits) else None,
                on_edge=vertex if side_edge is not None else None,
            )
        )

    start_singularity = surface.corner_walk(pid, vertex)
    end_corner = (last.polygon_id, end_vertex % last_polygon.size)
    end_singularity = surface.corner_walk(*end_corner)
    return SaddleConnection(
        start=Endpoint(
            singularity=start_singularity.id,
            coordinate=surface.angular_coordinate(start_singularity, corner, holonomy),
            corner=corner,
        ),
        end=Endpoint(
            singularity=end_singularity.id,
            coordinate=surface.angular_coordinate(
                end_singularity, end_corner, -holonomy
            ),
            corner=end_corner,
        ),
        holonomy=_point(holonomy),
        length=length,
        angle=direction_angle(holonomy),
        crossings=tuple(crossings),
        pieces=tuple(pieces),
        side_edge=side_edge,
    )


def side_connection(
    surface: TranslationSurface, polygon_id: int, edge: int, reverse: bool = False
) -> SaddleConnection:
    """The side along ``edge``; ``reverse`` runs it against the edge orientation."""
    if reverse:
        polygon_id, edge = surface.partner((polygon_id, edge))
    size = surface.polygon(polygon_id).size
    return build_connection(surface, (polygon_id, edge), (), (edge + 1) % size)


def reverse_connection(
    surface: TranslationSurface, sc: SaddleConnection
) -> SaddleConnection:
    """Same geodesic traversed from its end to its start."""
    exits = [surface.partner(crossing.edge)[1] for crossing in reversed(sc.crossings)]
    return build_connection(surface, sc.end.corner, exits, sc.start.corner[1])


def reverse_index(
    surface: TranslationSurface, connections: Sequence[SaddleConnection]
) -> List[Optional[int]]:
    """Index of each connection's reverse within ``connections`` (None if absent)."""
    lookup: Dict[Tuple[int, int, float, float, Tuple[str, ...]], int] = {
        sc.key: index for index, sc in enumerate(connections)
    }
    return [
        lookup.get(reverse_connection(surface, sc).key) for sc in connections
    ]


def find_by_holonomy(
    connections: Sequence[SaddleConnection], holonomy: Sequence[float]
) -> List[int]:
    """Indices of the connections whose holonomy rounds to ``holonomy``."""
    target = (
        round(float(holonomy[0]), DEDUP_DECIMALS) + 0.0,
        round(float(holonomy[1]), DEDUP_DECIMALS) + 0.0,
    )
    return [index for index, sc in enumerate(connections) if sc.key[2:4] == target]


def crossing_pieces(
    surface: TranslationSurface, sc: SaddleConnection
) -> Tuple[Piece, ...]:
    """Pieces used for intersection counting.

    A side also gets its copy on the partner edge so a crossing on either
    polygon's boundary is seen.
    """
    if sc.side_edge is None:
        return sc.pieces
    piece = sc.pieces[0]
    partner = surface.partner(sc.side_edge)
    shift = surface.translation(sc.side_edge)
    mirrored = Piece(
        polygon_id=partner[0],
        start=_point(np.asarray(piece.start) + shift),
        end=_point(np.asarray(piece.end) + shift),
        on_edge=partner[1],
    )
    return (piece, mirrored)
