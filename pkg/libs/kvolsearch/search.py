"""Closed curves from saddle connections and the maximal intersection ratio."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from libs.builders import detect_ngon
from libs.geodesics import (
    SaddleConnection,
    enumerate_saddle_connections,
    reverse_index,
)
from libs.intersect import (
    ClosedCurve,
    algebraic_intersection,
    crossing_matrix,
    sampled_crossing_count,
)
from libs.surface import TranslationSurface

from .base import EXCLUSION_SAMPLE, KVolReport, PairRecord, ScaleCheck, SearchConfig

logger = structlog.get_logger()

ROWS_PER_TASK = 64


def shortest_side(surface: TranslationSurface) -> float:
    """l0: the shortest polygon side."""
    return min(float(polygon.edge_lengths.min()) for polygon in surface.polygons)


def kvol_closed_form(n: int) -> float:
    """(n/8)·tan(π/n), the closed form printed for the regular n-gon."""
    return n / 8.0 * math.tan(math.pi / n)


def enumerate_closed_curves(
    surface: TranslationSurface,
    connections: Sequence[SaddleConnection],
    config: SearchConfig,
) -> List[ClosedCurve]:
    """Every chain of 1..max_components connections closing up.

    Visited singularities are pairwise distinct and each chain starts at its
    smallest singularity, so a curve appears once per orientation. A
    component followed by its own reverse is skipped.
    """
    k_max = config.max_components or len(surface.singularities)
    reverse = reverse_index(surface, connections)
    leaving: Dict[int, List[int]] = {}
    for index, sc in enumerate(connections):
        if sc.length <= config.lmax + 1e-12:
            leaving.setdefault(sc.start.singularity, []).append(index)

    curves: List[ClosedCurve] = []

    def extend(path: List[int], visited: List[int]) -> None:
        here = connections[path[-1]].end.singularity
        origin = visited[0]
        if here == origin:
            if len(path) == 1 or reverse[path[-1]] != path[-2]:
                ids = tuple(path)
                curves.append(ClosedCurve(tuple(connections[i] for i in ids), ids))
            return
        if len(path) >= k_max or here < origin or here in visited:
            return
        for index in leaving.get(here, []):
            if reverse[index] == path[-1]:
                continue
            extend(path + [index], visited + [here])

    for origin in sorted(leaving):
        for index in leaving[origin]:
            extend([index], [origin])

    logger.info(
        "closed_curves_enumerated",
        curves=len(curves),
        connections=len(connections),
        max_components=k_max,
    )
    return curves


def _canonical_ids(
    ids: Tuple[int, ...], starts: Sequence[int]
) -> Tuple[int, ...]:
    """Rotate so the component leaving the smallest singularity comes first."""
    first = min(range(len(ids)), key=lambda j: starts[ids[j]])
    return ids[first:] + ids[:first]


def fold_orientations(
    surface: TranslationSurface,
    connections: Sequence[SaddleConnection],
    curves: Sequence[ClosedCurve],
) -> List[ClosedCurve]:
    """Keep one orientation of every curve (the smaller component tuple)."""
    reverse = reverse_index(surface, connections)
    starts = [sc.start.singularity for sc in connections]
    kept: List[ClosedCurve] = []
    for curve in curves:
        back = [reverse[i] for i in reversed(curve.ids)]
        if any(i is None for i in back):
            kept.append(curve)
            continue
        flipped = _canonical_ids(tuple(i for i in back if i is not None), starts)
        if curve.ids <= flipped:
            kept.append(curve)
    return kept


@dataclass(frozen=True)
class _CurveTable:
    """Curves as padded arrays; component slot ``pad`` is empty."""

    comps: np.ndarray
    lengths: np.ndarray
    passes: np.ndarray
    incoming: np.ndarray
    outgoing: np.ndarray
    cones: np.ndarray
    pad: int


def _curve_table(
    surface: TranslationSurface, curves: Sequence[ClosedCurve], pad: int
) -> _CurveTable:
    k_max = max((curve.k for curve in curves), default=1)
    s = len(surface.singularities)
    comps = np.full((len(curves), k_max), pad, dtype=int)
    passes = np.zeros((len(curves), s), dtype=bool)
    incoming = np.zeros((len(curves), s))
    outgoing = np.zeros((len(curves), s))
    for row, curve in enumerate(curves):
        comps[row, : curve.k] = curve.ids
        for junction in curve.junctions:
            passes[row, junction.singularity] = True
            incoming[row, junction.singularity] = junction.incoming
            outgoing[row, junction.singularity] = junction.outgoing
    return _CurveTable(
        comps=comps,
        lengths=np.array([curve.length for curve in curves]),
        passes=passes,
        incoming=incoming,
        outgoing=outgoing,
        cones=np.array([z.cone_angle for z in surface.singularities]),
        pad=pad,
    )


def _row_intersections(
    table: _CurveTable,
    signed: np.ndarray,
    overlap: np.ndarray,
    row: int,
    others: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Int, interior count and overlap flag of curve ``row`` against ``others``."""
    own = table.comps[row][table.comps[row] != table.pad]
    theirs = table.comps[others]
    interior = np.zeros(others.shape[0], dtype=int)
    blocked = np.zeros(others.shape[0], dtype=bool)
    for a in own:
        interior += signed[a][theirs].sum(axis=1)
        blocked |= overlap[a][theirs].any(axis=1)
    singular = np.zeros(others.shape[0], dtype=int)
    for z in np.flatnonzero(table.passes[row]):
        cone = table.cones[z]
        a_out = table.outgoing[row, z]
        a_in = (table.incoming[row, z] - a_out) % cone
        b_in = (table.incoming[others, z] - a_out) % cone
        b_out = (table.outgoing[others, z] - a_out) % cone
        both = table.passes[others, z]
        positive = both & (b_out < a_in) & (a_in < b_in)
        negative = both & (b_in < a_in) & (a_in < b_out)
        singular += positive.astype(int) - negative.astype(int)
    return interior + singular, interior, blocked


@dataclass
class _Partial:
    best: float
    candidates: List[Tuple[float, int, int]]
    pairs: int
    excluded: int
    excluded_sample: List[Tuple[int, int]]


def _scan_rows(
    table: _CurveTable,
    signed: np.ndarray,
    overlap: np.ndarray,
    rows: range,
    tolerance: float,
) -> _Partial:
    total = table.comps.shape[0]
    result = _Partial(0.0, [], 0, 0, [])
    for row in rows:
        others = np.arange(row + 1, total)
        if others.size == 0:
            continue
        value, _, blocked = _row_intersections(table, signed, overlap, row, others)
        ratio = np.abs(value) / (table.lengths[row] * table.lengths[others])
        ratio[blocked] = -1.0
        result.pairs += int(others.size - blocked.sum())
        if blocked.any():
            result.excluded += int(blocked.sum())
            room = EXCLUSION_SAMPLE - len(result.excluded_sample)
            for col in others[blocked][:room]:
                result.excluded_sample.append((row, int(col)))
        top = float(ratio.max())
        if top <= tolerance or top < result.best - tolerance:
            continue
        result.best = max(result.best, top)
        for col in others[ratio >= result.best - tolerance]:
            result.candidates.append((float(ratio[col - row - 1]), row, int(col)))
    result.candidates = [
        item for item in result.candidates if item[0] >= result.best - tolerance
    ]
    return result


def _record(
    curves: Sequence[ClosedCurve],
    first: int,
    second: int,
    algebraic: int,
    interior: int,
    singular: Tuple[int, ...],
) -> PairRecord:
    a, b = curves[first], curves[second]
    return PairRecord(
        first=first,
        second=second,
        first_curve=a.describe(),
        second_curve=b.describe(),
        first_k=a.k,
        second_k=b.k,
        first_sides=all(sc.is_side for sc in a.components),
        second_sides=all(sc.is_side for sc in b.components),
        algebraic=algebraic,
        interior=interior,
        singular=singular,
        first_length=a.length,
        second_length=b.length,
    )


def _side_pairs(
    table: _CurveTable,
    signed: np.ndarray,
    overlap: np.ndarray,
    curves: Sequence[ClosedCurve],
    l0: float,
) -> List[Tuple[int, int]]:
    """Pairs of curves made of two l0-sides whose |Int| is 2."""
    rows = [
        row
        for row, curve in enumerate(curves)
        if curve.k == 2
        and all(
            sc.is_side and math.isclose(sc.length, l0, rel_tol=1e-9)
            for sc in curve.components
        )
    ]
    found: List[Tuple[int, int]] = []
    for position, row in enumerate(rows):
        others = np.array(rows[position + 1 :], dtype=int)
        if others.size == 0:
            continue
        value, _, blocked = _row_intersections(table, signed, overlap, row, others)
        for col, total, excluded in zip(others, value, blocked):
            if not excluded and abs(int(total)) == 2:
                found.append((row, int(col)))
    return found


def _verify(
    surface: TranslationSurface, curves: Sequence[ClosedCurve], first: int, second: int
) -> Optional[PairRecord]:
    """Recount a pair through the geometric code path and the sampling oracle."""
    a, b = curves[first], curves[second]
    report = algebraic_intersection(surface, a, b)
    sampled = sum(
        sampled_crossing_count(surface, x, y)
        for x in a.components
        for y in b.components
    )
    if sampled != len(report.interior):
        logger.error(
            "achiever_recount_mismatch",
            first=a.describe(),
            second=b.describe(),
            interior=len(report.interior),
            sampled=sampled,
        )
        return None
    return _record(
        curves,
        first,
        second,
        report.algebraic,
        len(report.interior),
        tuple(contribution.sign for contribution in report.singular),
    )


def sup_ratio(
    surface: TranslationSurface,
    config: SearchConfig,
    connections: Optional[Sequence[SaddleConnection]] = None,
) -> KVolReport:
    """Largest |Int(γ, δ)|/(l(γ)·l(δ)) over pairs of enumerated closed curves.

    Pairs sharing a component are excluded and counted. Every pair within
    ``config.tolerance`` of the maximum is recounted independently; the
    witness is the lexicographically least of them.
    """
    if connections is None:
        connections = enumerate_saddle_connections(
            surface,
            config.lmax,
            max_copies=config.max_copies,
            max_workers=config.max_workers,
        )
    curves = fold_orientations(
        surface, connections, enumerate_closed_curves(surface, connections, config)
    )
    size = len(connections)
    matrix = crossing_matrix(surface, connections)
    signed = np.zeros((size + 1, size + 1), dtype=int)
    signed[:size, :size] = matrix.signed
    overlap = np.zeros((size + 1, size + 1), dtype=bool)
    overlap[:size, :size] = matrix.overlap
    table = _curve_table(surface, curves, pad=size)

    tasks = [
        range(lo, min(lo + ROWS_PER_TASK, len(curves)))
        for lo in range(0, len(curves), ROWS_PER_TASK)
    ]
    with ThreadPoolExecutor(max_workers=max(1, config.max_workers)) as executor:
        partials = list(
            executor.map(
                partial(_scan_rows, table, signed, overlap, tolerance=config.tolerance),
                tasks,
            )
        )

    best = max((part.best for part in partials), default=0.0)
    candidates = sorted(
        (row, col)
        for part in partials
        for ratio, row, col in part.candidates
        if ratio >= best - config.tolerance and ratio > config.tolerance
    )
    excluded = sum(part.excluded for part in partials)
    excluded_sample = sorted(
        pair for part in partials for pair in part.excluded_sample
    )[:EXCLUSION_SAMPLE]
    if excluded:
        logger.info(
            "overlapping_pairs_excluded", count=excluded, sample=excluded_sample
        )

    achievers: List[PairRecord] = []
    verified = True
    for row, col in candidates[: config.verify_limit]:
        record = _verify(surface, curves, row, col)
        if record is None:
            verified = False
            continue
        achievers.append(record)
    truncated = max(0, len(candidates) - config.verify_limit)
    if truncated:
        logger.warning(
            "achievers_truncated", found=len(candidates), kept=config.verify_limit
        )
    witness = achievers[0] if achievers else None
    max_ratio = witness.ratio if witness is not None else 0.0

    l0 = shortest_side(surface)
    n = detect_ngon(surface)
    report = KVolReport(
        surface=surface.family.name,
        lmax=config.lmax,
        max_components=config.max_components or len(surface.singularities),
        l0=l0,
        area=surface.area,
        connections=size,
        curves=len(curves),
        pairs=sum(part.pairs for part in partials),
        max_ratio=max_ratio,
        witness=witness,
        achievers=achievers,
        excluded=excluded,
        excluded_sample=excluded_sample,
        verified=verified,
        closed_form=kvol_closed_form(n) if n is not None else None,
        truncated=truncated,
        side_pairs=_side_pairs(table, signed, overlap, curves, l0),
    )
    logger.info(
        "sup_ratio_complete",
        surface=report.surface,
        lmax=config.lmax,
        curves=len(curves),
        max_ratio=round(max_ratio, 12),
        achievers=len(achievers),
    )
    if report.closed_form is not None and not report.closed_form_matches:
        logger.info(
            "kvol_closed_form_differs",
            area_sup=round(report.area_sup, 9),
            closed_form=round(report.closed_form, 9),
        )
    return report


def scale_invariance_check(
    surface: TranslationSurface, config: SearchConfig, factor: float = 2.0
) -> ScaleCheck:
    """Rerun the search on the surface scaled by ``factor`` with lmax scaled too."""
    base = sup_ratio(surface, config)
    scaled_config = replace(config, lmax=config.lmax * factor)
    scaled = sup_ratio(surface.scaled(factor), scaled_config)
    return ScaleCheck(factor=factor, base=base, scaled=scaled)


def monotonicity_check(
    surface: TranslationSurface, config: SearchConfig, lmaxes: Sequence[float]
) -> List[Tuple[float, float]]:
    """(lmax, max ratio) for increasing lmax; the ratios never decrease.

    Connections are enumerated once at the largest lmax and filtered.
    """
    ordered = sorted(lmaxes)
    connections = enumerate_saddle_connections(
        surface,
        ordered[-1],
        max_copies=config.max_copies,
        max_workers=config.max_workers,
    )
    out: List[Tuple[float, float]] = []
    for lmax in ordered:
        window = [sc for sc in connections if sc.length <= lmax + 1e-12]
        step = replace(config, lmax=lmax)
        out.append((lmax, sup_ratio(surface, step, window).max_ratio))
    return out
