"""Interior crossings of saddle connections, vectorized per polygon."""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np
import structlog

from libs.geodesics import SaddleConnection, crossing_pieces
from libs.surface import EPS_LEN, TranslationSurface

from .base import CrossingMatrix, InteriorCrossing, OverlapError

logger = structlog.get_logger()

CHUNK_ROWS = 256
PARAM_TOL = 1e-9

# edge codes of a hit point on a piece
INTERIOR = -2
VERTEX = -1


@dataclass(frozen=True)
class _PieceTable:
    """Flattened pieces of several connections; -1 marks a vertex end or no edge."""

    owner: np.ndarray
    polygon: np.ndarray
    p0: np.ndarray
    d: np.ndarray
    start_edge: np.ndarray
    end_edge: np.ndarray
    on_edge: np.ndarray

    def __len__(self) -> int:
        return int(self.owner.shape[0])


@dataclass(frozen=True)
class _Hits:
    a: np.ndarray
    b: np.ndarray
    t: np.ndarray
    sign: np.ndarray
    overlaps: Set[Tuple[int, int]]


def _piece_table(
    surface: TranslationSurface, connections: Sequence[SaddleConnection]
) -> _PieceTable:
    rows: List[Tuple[int, int, float, float, float, float, int, int, int]] = []
    for owner, sc in enumerate(connections):
        for piece in crossing_pieces(surface, sc):
            rows.append(
                (
                    owner,
                    piece.polygon_id,
                    piece.start[0],
                    piece.start[1],
                    piece.end[0] - piece.start[0],
                    piece.end[1] - piece.start[1],
                    -1 if piece.start_edge is None else piece.start_edge,
                    -1 if piece.end_edge is None else piece.end_edge,
                    -1 if piece.on_edge is None else piece.on_edge,
                )
            )
    if not rows:
        empty = np.zeros((0, 2))
        ints = np.zeros(0, dtype=int)
        return _PieceTable(ints, ints, empty, empty, ints, ints, ints)
    data = np.asarray(rows, dtype=float)
    as_int = data[:, [0, 1, 6, 7, 8]].astype(int)
    return _PieceTable(
        owner=as_int[:, 0],
        polygon=as_int[:, 1],
        p0=data[:, 2:4],
        d=data[:, 4:6],
        start_edge=as_int[:, 2],
        end_edge=as_int[:, 3],
        on_edge=as_int[:, 4],
    )


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _edge_codes(
    table: _PieceTable, index: np.ndarray, param: np.ndarray
) -> np.ndarray:
    """Edge under the hit point: INTERIOR, VERTEX or an edge index."""
    near0 = param <= PARAM_TOL
    near1 = param >= 1.0 - PARAM_TOL
    on = table.on_edge[index]
    codes = np.full(index.shape, INTERIOR, dtype=int)
    codes = np.where(near0, table.start_edge[index], codes)
    codes = np.where(near1, table.end_edge[index], codes)
    codes = np.where(on >= 0, on, codes)
    codes = np.where((on >= 0) & (near0 | near1), VERTEX, codes)
    return codes


def _canonical_mask(surface: TranslationSurface) -> Dict[int, np.ndarray]:
    return {
        polygon.id: np.array(
            [
                surface.canonical_edge((polygon.id, edge)) == (polygon.id, edge)
                for edge in range(polygon.size)
            ]
        )
        for polygon in surface.polygons
    }


def _hits(
    surface: TranslationSurface,
    left: _PieceTable,
    right: _PieceTable,
    eps: float = EPS_LEN,
    chunk: int = CHUNK_ROWS,
) -> _Hits:
    """Transverse piece crossings away from vertices.

    A crossing on a glued edge is seen from both polygons; only the copy on
    the canonical edge of the pair is kept.
    """
    canonical = _canonical_mask(surface)
    found_a: List[np.ndarray] = []
    found_b: List[np.ndarray] = []
    found_t: List[np.ndarray] = []
    found_sign: List[np.ndarray] = []
    overlaps: Set[Tuple[int, int]] = set()

    for pid in np.unique(left.polygon):
        rows_a = np.flatnonzero(left.polygon == pid)
        rows_b = np.flatnonzero(right.polygon == pid)
        if rows_b.size == 0:
            continue
        q0 = right.p0[rows_b][None, :, :]
        e = right.d[rows_b][None, :, :]
        len_b = np.hypot(e[..., 0], e[..., 1])
        for lo in range(0, rows_a.size, chunk):
            block = rows_a[lo : lo + chunk]
            p0 = left.p0[block][:, None, :]
            d = left.d[block][:, None, :]
            len_a = np.hypot(d[..., 0], d[..., 1])
            w = q0 - p0
            den = _cross(d, e)
            transverse = np.abs(den) > eps * len_a * len_b
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(transverse, _cross(w, e) / den, -1.0)
                u = np.where(transverse, _cross(w, d) / den, -1.0)
            inside = (
                transverse
                & (t >= -PARAM_TOL)
                & (t <= 1.0 + PARAM_TOL)
                & (u >= -PARAM_TOL)
                & (u <= 1.0 + PARAM_TOL)
            )

            collinear = ~transverse & (np.abs(_cross(w, d)) <= eps * len_a)
            if collinear.any():
                dd = np.maximum(len_a * len_a, eps)
                s0 = np.sum(w * d, axis=-1) / dd
                s1 = np.sum((w + e) * d, axis=-1) / dd
                shared = (
                    np.minimum(1.0, np.maximum(s0, s1))
                    - np.maximum(0.0, np.minimum(s0, s1))
                ) * len_a
                for i, j in zip(*np.nonzero(collinear & (shared > eps))):
                    overlaps.add((int(block[i]), int(rows_b[j])))

            ia, jb = np.nonzero(inside)
            if ia.size == 0:
                continue
            ga, gb = block[ia], rows_b[jb]
            ta, ub = t[ia, jb], u[ia, jb]
            code_a = _edge_codes(left, ga, ta)
            code_b = _edge_codes(right, gb, ub)
            edge = np.where(code_a >= 0, code_a, code_b)
            keep = (code_a != VERTEX) & (code_b != VERTEX)
            on_boundary = edge >= 0
            keep &= ~on_boundary | canonical[int(pid)][np.maximum(edge, 0)]
            found_a.append(ga[keep])
            found_b.append(gb[keep])
            found_t.append(ta[keep])
            found_sign.append(np.sign(den[ia, jb][keep]).astype(int))

    if not found_a:
        empty_int = np.zeros(0, dtype=int)
        return _Hits(empty_int, empty_int, np.zeros(0), empty_int, overlaps)
    return _Hits(
        a=np.concatenate(found_a),
        b=np.concatenate(found_b),
        t=np.concatenate(found_t),
        sign=np.concatenate(found_sign),
        overlaps=overlaps,
    )


def transverse_crossings(
    surface: TranslationSurface,
    first: SaddleConnection,
    second: SaddleConnection,
    eps: float = EPS_LEN,
) -> List[InteriorCrossing]:
    """Signed interior crossings of two saddle connections.

    The sign is +1 when (direction of ``first``, direction of ``second``) is
    positively oriented. Meetings at singularities are left to the singular
    sign. Raises OverlapError if the two share a sub-segment.
    """
    left = _piece_table(surface, [first])
    right = _piece_table(surface, [second])
    hits = _hits(surface, left, right, eps)
    if hits.overlaps:
        raise OverlapError(f"{first.describe()} overlaps {second.describe()}")
    out: List[InteriorCrossing] = []
    for a, t, sign in zip(hits.a, hits.t, hits.sign):
        point = left.p0[a] + t * left.d[a]
        out.append(
            InteriorCrossing(
                point=(float(point[0]), float(point[1])),
                polygon_id=int(left.polygon[a]),
                sign=int(sign),
            )
        )
    out.sort(key=lambda crossing: (crossing.polygon_id, crossing.point))
    return out


def crossing_matrix(
    surface: TranslationSurface,
    connections: Sequence[SaddleConnection],
    eps: float = EPS_LEN,
    chunk: int = CHUNK_ROWS,
) -> CrossingMatrix:
    """Signed and unsigned interior crossing counts of every ordered pair."""
    size = len(connections)
    table = _piece_table(surface, connections)
    hits = _hits(surface, table, table, eps, chunk)
    owner_a = table.owner[hits.a]
    owner_b = table.owner[hits.b]
    signed = np.zeros((size, size), dtype=int)
    geometric = np.zeros((size, size), dtype=int)
    np.add.at(signed, (owner_a, owner_b), hits.sign)
    np.add.at(geometric, (owner_a, owner_b), 1)
    overlap = np.zeros((size, size), dtype=bool)
    for a, b in hits.overlaps:
        overlap[table.owner[a], table.owner[b]] = True
    overlap |= overlap.T
    logger.debug(
        "crossing_matrix",
        connections=size,
        pieces=len(table),
        crossings=int(geometric.sum()),
        overlapping_pairs=int(np.triu(overlap, 1).sum()),
    )
    return CrossingMatrix(signed=signed, geometric=geometric, overlap=overlap)


def _canonical_point(
    surface: TranslationSurface, polygon_id: int, point: np.ndarray, tol: float
) -> Tuple[int, float, float]:
    edge = surface.locate_edge(polygon_id, point, tol)
    if edge is not None:
        ref = (polygon_id, edge)
        canonical = surface.canonical_edge(ref)
        if canonical != ref:
            point = point + surface.translation(ref)
            polygon_id = canonical[0]
    return (polygon_id, round(float(point[0]), 7), round(float(point[1]), 7))


def _near_vertex(
    surface: TranslationSurface, polygon_id: int, point: np.ndarray, tol: float
) -> bool:
    corners = surface.polygon(polygon_id).points
    return bool(np.min(np.hypot(*(corners - point).T)) <= tol)


def sampled_crossing_count(
    surface: TranslationSurface,
    first: SaddleConnection,
    second: SaddleConnection,
    samples: int = 33,
    tol: float = 1e-7,
) -> int:
    """Interior crossing count found by sampling signed distances.

    Each piece of ``first`` is sampled; a sign change (or zero) of the signed
    distance to a piece of ``second`` is refined by bisection. Points on glued
    edges are identified before counting, so nothing depends on the
    canonical-edge rule used by :func:`transverse_crossings`.
    """
    seen: Set[Tuple[int, float, float]] = set()
    for pa in crossing_pieces(surface, first):
        a0, a1 = np.asarray(pa.start), np.asarray(pa.end)
        for pb in crossing_pieces(surface, second):
            if pb.polygon_id != pa.polygon_id:
                continue
            b0, b1 = np.asarray(pb.start), np.asarray(pb.end)
            normal = np.array([-(b1 - b0)[1], (b1 - b0)[0]])
            normal /= math.hypot(*normal)

            def distance(s: float) -> float:
                return float(np.dot(a0 + s * (a1 - a0) - b0, normal))

            grid = np.linspace(0.0, 1.0, samples)
            values = np.array([distance(s) for s in grid])
            if np.all(np.abs(values) <= tol):
                continue
            roots: List[float] = []
            for k in range(samples - 1):
                if abs(values[k]) <= tol:
                    roots.append(float(grid[k]))
                elif values[k] * values[k + 1] < 0.0:
                    lo, hi = float(grid[k]), float(grid[k + 1])
                    for _ in range(60):
                        mid = 0.5 * (lo + hi)
                        if distance(lo) * distance(mid) <= 0.0:
                            hi = mid
                        else:
                            lo = mid
                    roots.append(0.5 * (lo + hi))
            if abs(values[-1]) <= tol:
                roots.append(1.0)
            for s in roots:
                point = a0 + s * (a1 - a0)
                along = np.dot(point - b0, b1 - b0) / np.dot(b1 - b0, b1 - b0)
                if not -tol <= along <= 1.0 + tol:
                    continue
                if _near_vertex(surface, pa.polygon_id, point, tol):
                    continue
                seen.add(_canonical_point(surface, pa.polygon_id, point, tol))
    return len(seen)
