"""Numerical checks of the case-by-case inequalities on the regular n-gon."""

import math
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import structlog

from libs.builders import detect_ngon
from libs.geodesics import SaddleConnection, enumerate_saddle_connections, reverse_index
from libs.intersect import ClosedCurve, algebraic_intersection, crossing_matrix
from libs.segments import SectorDiagrams, classify_type, is_short_diagonal
from libs.surface import TranslationSurface

from .base import RATIO_TOLERANCE, CaseLemmaReport, LemmaResult

logger = structlog.get_logger()

MAX_VIOLATIONS = 20


class _Tally:
    """Running record of one inequality."""

    def __init__(self, name: str, statement: str, strict: bool):
        self.name = name
        self.statement = statement
        self.strict = strict
        self.checked = 0
        self.equalities = 0
        self.max_value = 0.0
        self.violations: List[str] = []

    def add(self, value: float, bound: float, context: str, equality_ok: bool) -> None:
        self.checked += 1
        self.max_value = max(self.max_value, value)
        if abs(value - bound) <= RATIO_TOLERANCE:
            self.equalities += 1
            if self.strict or not equality_ok:
                self.violate(f"{context}: equality {value:.12f}")
        elif value > bound:
            self.violate(f"{context}: {value:.12f} > {bound:.12f}")

    def violate(self, message: str) -> None:
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append(message)
        logger.warning("case_lemma_violation", lemma=self.name, detail=message)

    def result(self) -> LemmaResult:
        return LemmaResult(
            name=self.name,
            statement=self.statement,
            checked=self.checked,
            equalities=self.equalities,
            max_value=self.max_value,
            violations=tuple(self.violations),
        )


def _undirected(
    surface: TranslationSurface, connections: Sequence[SaddleConnection]
) -> List[SaddleConnection]:
    reverse = reverse_index(surface, connections)
    return [
        sc
        for index, sc in enumerate(connections)
        if reverse[index] is None or index <= reverse[index]
    ]


def _side_edges(surface: TranslationSurface, sc: SaddleConnection) -> Tuple[int, ...]:
    assert sc.side_edge is not None
    return (sc.side_edge[1], surface.partner(sc.side_edge)[1])


def _adjacent_sides(
    surface: TranslationSurface, first: SaddleConnection, second: SaddleConnection
) -> bool:
    n = surface.polygons[0].size
    return any(
        (a - b) % n in (1, n - 1)
        for a in _side_edges(surface, first)
        for b in _side_edges(surface, second)
    )


def _joins_same_points(first: SaddleConnection, second: SaddleConnection) -> bool:
    """Whether the two connections chain into a closed curve."""
    ends_a = sorted((first.start.singularity, first.end.singularity))
    ends_b = sorted((second.start.singularity, second.end.singularity))
    return ends_a == ends_b and not first.is_closed


def verify_case_lemmas(
    surface: TranslationSurface,
    lmax: float,
    connections: Optional[Sequence[SaddleConnection]] = None,
    diagrams: Optional[SectorDiagrams] = None,
) -> CaseLemmaReport:
    """Check each case inequality on every matching triple (γ1, γ2, β) or pair.

    γ = γ1 ∪ γ2 ranges over the two-component closed curves whose first
    component is a side; β over all connections. Counts are interior
    crossings; pairs sharing a sub-segment are skipped and counted.
    """
    n = detect_ngon(surface)
    if n is None or n % 4 != 2:
        raise ValueError("case lemmas need a regular n-gon with n = 2 mod 4")
    if connections is None:
        connections = enumerate_saddle_connections(surface, lmax)
    diagrams = diagrams or SectorDiagrams(surface)
    scs = _undirected(surface, [sc for sc in connections if sc.length <= lmax])
    matrix = crossing_matrix(surface, scs)
    counts = matrix.geometric
    overlap = matrix.overlap
    types = [classify_type(surface, sc, diagrams) for sc in scs]
    sides = [index for index, sc in enumerate(scs) if sc.is_side]
    short = [is_short_diagonal(sc, n) for sc in scs]
    excluded = 0

    ia = _Tally(
        "Ia",
        "(|γ1∩β| + |γ2∩β| + 1)/(l(γ)·l(β)) ≤ 1/2, γ1, γ2 non-adjacent sides;"
        " equality only for a side β",
        strict=False,
    )
    ib = _Tally(
        "Ib",
        "(|γ1∩β| + |γ2∩β| + s_β)/(l(γ)·l(β)) < 1/2, γ2 of type 2,"
        " γ1 a side other than σ(1), σ(2), β not a side",
        strict=True,
    )
    ic = _Tally(
        "Ic",
        "(|γ1∩β| + |γ2∩β| + 1)/(l(γ)·l(β)) < 1/2, γ1 a side, γ2 of type 3",
        strict=True,
    )
    id_ = _Tally(
        "Id",
        "(|γ1∩β| + |γ2∩β| + 1)/(l(γ)·l(β)) < 1/2, γ1 a side, γ2 of type 4,"
        " β not a side",
        strict=True,
    )
    iia = _Tally(
        "IIa",
        "two short diagonals: |Int| ≤ 1 and Int/(l·l) ≤ 1/(2cos(π/n))²",
        strict=False,
    )
    iib = _Tally(
        "IIb",
        "(|α∩β| + 1)/(l(α)·l(β)) < 1/2, α, β not sides nor both short diagonals",
        strict=True,
    )

    def over_beta(
        tally: _Tally,
        g1: int,
        g2: int,
        wanted: Callable[[int], bool],
        extra: Callable[[int], int],
    ) -> None:
        nonlocal excluded
        length = scs[g1].length + scs[g2].length
        for b in range(len(scs)):
            if not wanted(b):
                continue
            if overlap[g1, b] or overlap[g2, b]:
                excluded += 1
                continue
            value = (counts[g1, b] + counts[g2, b] + extra(b)) / (
                length * scs[b].length
            )
            context = (
                f"γ1={scs[g1].describe()} γ2={scs[g2].describe()} "
                f"β={scs[b].describe()}"
            )
            tally.add(value, 0.5, context, equality_ok=scs[b].is_side)

    for g1, g2 in combinations(sides, 2):
        if _adjacent_sides(surface, scs[g1], scs[g2]):
            continue
        over_beta(ia, g1, g2, lambda b: True, lambda b: 1)

    for g1 in sides:
        for g2 in range(len(scs)):
            if types[g2] < 2 or not _joins_same_points(scs[g1], scs[g2]):
                continue
            if types[g2] == 2:
                diagram = diagrams.for_direction(scs[g2].angle)
                side_label = surface.label(scs[g1].side_edge)
                if diagram is not None and side_label in diagram.sigma[:2]:
                    continue
                over_beta(
                    ib,
                    g1,
                    g2,
                    lambda b: not scs[b].is_side,
                    lambda b: 1 if scs[b].is_closed else 2,
                )
            elif types[g2] == 3:
                over_beta(ic, g1, g2, lambda b: True, lambda b: 1)
            else:
                over_beta(id_, g1, g2, lambda b: not scs[b].is_side, lambda b: 1)

    diagonal_bound = 1.0 / (2.0 * math.cos(math.pi / n)) ** 2
    closed_short = [i for i, flag in enumerate(short) if flag and scs[i].is_closed]
    for a, b in combinations(closed_short, 2):
        if overlap[a, b]:
            excluded += 1
            continue
        pair_report = algebraic_intersection(
            surface, ClosedCurve((scs[a],)), ClosedCurve((scs[b],))
        )
        value = abs(pair_report.algebraic) / (scs[a].length * scs[b].length)
        context = f"α={scs[a].describe()} β={scs[b].describe()}"
        if abs(pair_report.algebraic) > 1:
            iia.violate(f"{context}: |Int| = {abs(pair_report.algebraic)}")
        iia.add(value, diagonal_bound, context, equality_ok=True)

    non_sides = [index for index, t in enumerate(types) if t >= 2]
    for a, b in combinations(non_sides, 2):
        if short[a] and short[b]:
            continue
        if overlap[a, b]:
            excluded += 1
            continue
        value = (counts[a, b] + 1) / (scs[a].length * scs[b].length)
        context = f"α={scs[a].describe()} β={scs[b].describe()}"
        iib.add(value, 0.5, context, equality_ok=False)

    report = CaseLemmaReport(
        n=n,
        lmax=lmax,
        lemmas=[t.result() for t in (ia, ib, ic, id_, iia, iib)],
        excluded=excluded,
    )
    logger.info(
        "case_lemmas_checked",
        n=n,
        lmax=lmax,
        checked={lemma.name: lemma.checked for lemma in report.lemmas},
        passed=report.passed,
    )
    return report
