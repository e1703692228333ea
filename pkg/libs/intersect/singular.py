"""Signs at singularities and algebraic intersection of closed curves."""

from typing import List

import structlog

from libs.surface import EPS_ANG, TranslationSurface

from .base import (
    ClosedCurve,
    DegenerateSingularError,
    InteriorCrossing,
    IntersectionReport,
    OverlapError,
    SingularContribution,
)
from .crossings import transverse_crossings

logger = structlog.get_logger()


def singular_sign(
    cone_angle: float,
    a_in: float,
    a_out: float,
    b_in: float,
    b_out: float,
    eps: float = EPS_ANG,
) -> int:
    """Sign of two curves meeting at a cone point, from the four ray coordinates.

    Counter-clockwise order (a_out, b_out, a_in, b_in) gives +1, (a_out, b_in,
    a_in, b_out) gives -1 and non-interleaved rays give 0.
    """
    rays = [a_in, a_out, b_in, b_out]
    for i in range(4):
        for j in range(i + 1, 4):
            gap = (rays[i] - rays[j]) % cone_angle
            if min(gap, cone_angle - gap) <= eps:
                raise DegenerateSingularError(
                    f"rays {rays[i]:.12f} and {rays[j]:.12f} coincide on a cone "
                    f"of angle {cone_angle:.12f}"
                )

    def position(x: float) -> float:
        return (x - a_out) % cone_angle

    r_a_in, r_b_in, r_b_out = position(a_in), position(b_in), position(b_out)
    if r_b_out < r_a_in < r_b_in:
        return 1
    if r_b_in < r_a_in < r_b_out:
        return -1
    return 0


def algebraic_intersection(
    surface: TranslationSurface, first: ClosedCurve, second: ClosedCurve
) -> IntersectionReport:
    """Signed interior and singular intersections of two closed curves.

    A curve against itself has no intersection. Raises OverlapError when a
    component of one curve shares a sub-segment with a component of the other.
    """
    if first is second:
        return IntersectionReport()

    interior: List[InteriorCrossing] = []
    for i, a in enumerate(first.components):
        for j, b in enumerate(second.components):
            try:
                found = transverse_crossings(surface, a, b)
            except OverlapError:
                logger.info(
                    "curve_overlap",
                    first=first.describe(),
                    second=second.describe(),
                    components=(i, j),
                )
                raise
            interior.extend(
                InteriorCrossing(c.point, c.polygon_id, c.sign, (i, j)) for c in found
            )

    singular: List[SingularContribution] = []
    passes = {junction.singularity: junction for junction in second.junctions}
    for junction in first.junctions:
        other = passes.get(junction.singularity)
        if other is None:
            continue
        cone = surface.singularity(junction.singularity).cone_angle
        sign = singular_sign(
            cone, junction.incoming, junction.outgoing, other.incoming, other.outgoing
        )
        singular.append(SingularContribution(junction.singularity, sign))
    singular.sort(key=lambda contribution: contribution.singularity)
    return IntersectionReport(interior=tuple(interior), singular=tuple(singular))
