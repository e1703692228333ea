"""Upper bounds on the number of interior crossings of two saddle connections."""

from typing import Optional

import structlog

from libs.builders import detect_ngon
from libs.geodesics import SaddleConnection
from libs.segments import (
    SectorDiagrams,
    bm_subdivide,
    classify_type,
    is_odd_saddle_connection,
    subdivide,
)
from libs.surface import TranslationSurface

from .base import BMIntersectionCheck, IntersectionCheck
from .crossings import transverse_crossings

logger = structlog.get_logger()


def intersection_bound(type_a: int, n_a: int, type_b: int, n_b: int) -> int:
    """Table bound on |α ∩ β| from the types and segment counts.

    Entries pairing a side or an image of Δ with a longer connection use the
    segment count of the longer one.
    """
    (lo, n_lo), (hi, n_hi) = sorted([(type_a, n_a), (type_b, n_b)])
    if lo == 1:
        return {1: 0, 2: 1, 3: n_hi - 1, 4: n_hi - 1}[hi]
    if lo == 2:
        return {2: 2, 3: 2 * n_hi, 4: 2 * n_hi - 1}[hi]
    if lo == 3:
        return n_lo * n_hi if hi == 3 else 2 * n_lo * n_hi - 1
    return n_lo * n_hi


def big_cylinder_bound(
    type_a: int, n_a: int, q_a: int, type_b: int, n_b: int, q_b: int
) -> int:
    """n_α·n_β, relaxed to n_α·(n_β + q_β) when α lies inside the big cylinder."""
    options = []
    if type_a == 3:
        options.append(n_a * (n_b + q_b))
    if type_b == 3:
        options.append(n_b * (n_a + q_a))
    return max(options) if options else n_a * n_b


def verify_intersection_table(
    surface: TranslationSurface,
    first: SaddleConnection,
    second: SaddleConnection,
    diagrams: Optional[SectorDiagrams] = None,
) -> IntersectionCheck:
    """Count interior crossings and compare with both bounds.

    Needs a regular n-gon with n ≡ 2 mod 4. Raises OverlapError for pairs
    sharing a sub-segment.
    """
    n = detect_ngon(surface)
    if n is None or n % 4 != 2:
        raise ValueError("intersection tables need a regular n-gon with n = 2 mod 4")
    diagrams = diagrams or SectorDiagrams(surface)
    count = len(transverse_crossings(surface, first, second))
    dec_a = subdivide(surface, first, diagrams)
    dec_b = subdivide(surface, second, diagrams)
    type_a = classify_type(surface, first, diagrams)
    type_b = classify_type(surface, second, diagrams)
    n_a, n_b = dec_a.counts.n, dec_b.counts.n
    check = IntersectionCheck(
        count=count,
        types=(type_a, type_b),
        counts=(n_a, n_b),
        sandwiched=(dec_a.counts.q, dec_b.counts.q),
        table_bound=intersection_bound(type_a, n_a, type_b, n_b),
        cylinder_bound=big_cylinder_bound(
            type_a, n_a, dec_a.counts.q, type_b, n_b, dec_b.counts.q
        ),
    )
    if not check.passed:
        logger.warning(
            "intersection_bound_violated",
            first=first.describe(),
            second=second.describe(),
            findings=check.findings(),
        )
    return check


def verify_bm_intersection_bound(
    surface: TranslationSurface, first: SaddleConnection, second: SaddleConnection
) -> BMIntersectionCheck:
    """|α ∩ β| ≤ n_α·n_β on a Bouw-Moller surface; equality only for odd pairs."""
    count = len(transverse_crossings(surface, first, second))
    dec_a = bm_subdivide(surface, first)
    dec_b = bm_subdivide(surface, second)
    check = BMIntersectionCheck(
        count=count,
        counts=(dec_a.counts.n, dec_b.counts.n),
        odd=(is_odd_saddle_connection(dec_a), is_odd_saddle_connection(dec_b)),
    )
    if not check.passed:
        logger.warning(
            "bm_intersection_bound_violated",
            first=first.describe(),
            second=second.describe(),
            count=count,
            bound=check.bound,
            odd=check.odd,
        )
    return check
