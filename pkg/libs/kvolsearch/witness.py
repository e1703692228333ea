"""Extremal side pairs on Bouw-Moller surfaces."""

import math
from itertools import product
from typing import List, Optional, Sequence

import structlog

from libs.builders import BouwMollerParams, bouw_moller
from libs.geodesics import (
    SaddleConnection,
    enumerate_saddle_connections,
    reverse_connection,
    side_connection,
)
from libs.intersect import (
    ClosedCurve,
    CurveValidationError,
    DegenerateSingularError,
    OverlapError,
    algebraic_intersection,
)
from libs.surface import TranslationSurface

from .base import (
    ConjectureReport,
    SearchConfig,
    WitnessConstructionError,
    WitnessPair,
    WitnessPreconditionError,
)
from .search import sup_ratio

logger = structlog.get_logger()


def polygon_sides(
    surface: TranslationSurface, polygon_id: int
) -> List[SaddleConnection]:
    """Sides of a polygon joining two different singularities, both orientations."""
    out: List[SaddleConnection] = []
    for edge in range(surface.polygon(polygon_id).size):
        for reverse in (False, True):
            sc = side_connection(surface, polygon_id, edge, reverse=reverse)
            if not sc.is_closed:
                out.append(sc)
    return out


def _same_side(
    surface: TranslationSurface, first: SaddleConnection, second: SaddleConnection
) -> bool:
    return first.key == second.key or (
        first.key == reverse_connection(surface, second).key
    )


def _first_after(
    cone: float, start: float, rays: Sequence[float], after: float
) -> Optional[int]:
    """Index of the first ray met counter-clockwise from ``after``."""
    best: Optional[int] = None
    for index, ray in enumerate(rays):
        position = (ray - start) % cone
        if position <= (after - start) % cone:
            continue
        if best is None or position < (rays[best] - start) % cone:
            best = index
    return best


def _fan_walk(
    surface: TranslationSurface,
    alpha1: SaddleConnection,
    alpha2: SaddleConnection,
    far_sides: Sequence[SaddleConnection],
) -> Optional[ClosedCurve]:
    """β = β1 ∪ β2 met turning counter-clockwise around the start of α1.

    β1 is the first far side leaving towards the end of α1 after α1, β2 the
    first one arriving from there after α2.
    """
    z1, z2 = alpha1.start.singularity, alpha1.end.singularity
    cone = surface.singularity(z1).cone_angle
    start = alpha1.start.coordinate
    ends = [(sc.start.singularity, sc.end.singularity) for sc in far_sides]
    leaving = [sc for sc, pair in zip(far_sides, ends) if pair == (z1, z2)]
    arriving = [sc for sc, pair in zip(far_sides, ends) if pair == (z2, z1)]
    alpha2_ray = alpha2.end.coordinate
    first = _first_after(cone, start, [sc.start.coordinate for sc in leaving], start)
    if first is None:
        return None
    beta1 = leaving[first]
    if (beta1.start.coordinate - start) % cone >= (alpha2_ray - start) % cone:
        return None
    second = _first_after(
        cone, start, [sc.end.coordinate for sc in arriving], alpha2_ray
    )
    if second is None:
        return None
    beta2 = arriving[second]
    if _same_side(surface, beta1, beta2):
        return None
    return ClosedCurve((beta1, beta2))


def construct_witness_pair_bm(m: int, n: int) -> WitnessPair:
    """Two-side curves α on P(0) and β on P(m-1) meeting twice with one sign.

    Needs 1 < gcd(m, n) < n. Raises WitnessPreconditionError otherwise and
    WitnessConstructionError if no candidate pair meets twice.
    """
    d = BouwMollerParams(m, n).d
    if d == 1:
        raise WitnessPreconditionError(
            f"gcd({m}, {n}) = 1: S_{m},{n} has a single singularity"
        )
    if d == n:
        raise WitnessPreconditionError(
            f"gcd({m}, {n}) equals n = {n}: no two sides of P(0) join the same "
            "pair of singularities"
        )
    surface = bouw_moller(m, n)
    near = polygon_sides(surface, 0)
    far = polygon_sides(surface, m - 1)
    for alpha1, alpha2 in product(near, near):
        if (alpha1.end.singularity, alpha1.start.singularity) != (
            alpha2.start.singularity,
            alpha2.end.singularity,
        ) or _same_side(surface, alpha1, alpha2):
            continue
        beta = _fan_walk(surface, alpha1, alpha2, far)
        if beta is None:
            continue
        try:
            alpha = ClosedCurve((alpha1, alpha2))
            report = algebraic_intersection(surface, alpha, beta)
        except (CurveValidationError, DegenerateSingularError, OverlapError):
            continue
        if abs(report.algebraic) == 2:
            pair = WitnessPair(first=alpha, second=beta, report=report)
            logger.info(
                "bm_witness_found",
                m=m,
                n=n,
                alpha=alpha.describe(),
                beta=beta.describe(),
                algebraic=report.algebraic,
                ratio=round(pair.ratio, 12),
            )
            return pair
    raise WitnessConstructionError(
        f"no side pair of S_{m},{n} intersects twice with the same sign"
    )


def explore_conjecture(m: int, n: int, config: SearchConfig) -> ConjectureReport:
    """Search S_{m,n} with gcd(m, n) = n and compare with 1/(4·l0²).

    Advisory only: a ratio above the bound is logged as an error but
    nothing is raised.
    """
    if math.gcd(m, n) != n:
        raise WitnessPreconditionError(
            f"gcd({m}, {n}) = {math.gcd(m, n)} differs from n = {n}"
        )
    surface = bouw_moller(m, n)
    connections = enumerate_saddle_connections(
        surface,
        config.lmax,
        max_copies=config.max_copies,
        max_workers=config.max_workers,
    )
    search = sup_ratio(surface, config, connections)
    sides_only = sup_ratio(surface, config, [sc for sc in connections if sc.is_side])
    report = ConjectureReport(
        m=m,
        n=n,
        search=search,
        side_ratio=sides_only.max_ratio,
        side_witness=sides_only.witness,
    )
    if report.exceeds_bound:
        logger.error(
            "conjecture_bound_exceeded",
            m=m,
            n=n,
            max_ratio=round(search.max_ratio, 12),
            bound=report.bound,
            witness=search.witness.first_curve if search.witness else None,
        )
    else:
        logger.info(
            "conjecture_explored",
            m=m,
            n=n,
            max_ratio=round(search.max_ratio, 12),
            side_ratio=round(report.side_ratio, 12),
        )
    return report
