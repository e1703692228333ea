"""Verification suites: the claims about each surface family, checked numerically."""

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

import structlog

from libs.builders import bouw_moller, regular_ngon
from libs.geodesics import (
    DEFAULT_MAX_COPIES,
    CylinderDecompositionError,
    NonPeriodicDirectionError,
    SaddleConnection,
    cylinder_decomposition,
    enumerate_saddle_connections,
    reverse_index,
    side_directions,
)
from libs.intersect import (
    BMIntersectionCheck,
    IntersectionCheck,
    big_cylinder_bound,
    crossing_matrix,
    intersection_bound,
)
from libs.kvolsearch import (
    RATIO_TOLERANCE,
    KVolReport,
    PairRecord,
    SearchConfig,
    WitnessConstructionError,
    WitnessPreconditionError,
    construct_witness_pair_bm,
    monotonicity_check,
    scale_invariance_check,
    sup_ratio,
    verify_case_lemmas,
)
from libs.segments import (
    DECAGON_DIAGONALS,
    Decomposition,
    SectorDiagrams,
    bm_length_bound,
    bm_subdivide,
    catalogue_check,
    classify_type,
    diagonal_lengths,
    is_end_polygon_side,
    is_longest_diagonal,
    is_odd_saddle_connection,
    is_short_diagonal,
    length_lower_bound,
    long_segment_bound,
    long_segment_check,
    refined_trip_bound,
    subdivide,
    trip_bound,
)
from libs.surface import TranslationSurface

from ..reporting import CheckModel, VerificationReportModel, lemma_checks

logger = structlog.get_logger()

SUITES = ("decagon", "ngon14", "ngon-mod4", "bm")
MAX_FINDINGS = 20
BM_SINGULARITY_CASES = ((4, 8), (6, 8), (8, 4), (6, 9))
BM_WITNESS_CASES = ((4, 8), (6, 8))


@dataclass(frozen=True)
class NgonWindows:
    """Length windows of the n-gon checks, in units of the side length."""

    lengths: float
    table: float
    lemmas: float
    kvol: float
    cylinders: int


NGON_WINDOWS: Dict[int, NgonWindows] = {
    10: NgonWindows(lengths=8.0, table=5.0, lemmas=4.0, kvol=6.0, cylinders=2),
    14: NgonWindows(lengths=8.0, table=4.0, lemmas=3.5, kvol=6.0, cylinders=3),
}


def _within(
    connections: Sequence[SaddleConnection], lmax: float
) -> List[SaddleConnection]:
    return [sc for sc in connections if sc.length <= lmax + 1e-12]


def _undirected(
    surface: TranslationSurface, connections: Sequence[SaddleConnection]
) -> List[SaddleConnection]:
    reverse = reverse_index(surface, connections)
    return [
        sc
        for index, sc in enumerate(connections)
        if reverse[index] is None or index <= reverse[index]
    ]


class _Findings:
    """Capped list of failure messages plus the total count."""

    def __init__(self) -> None:
        self.items: List[str] = []
        self.total = 0

    def add(self, message: str) -> None:
        self.total += 1
        if len(self.items) < MAX_FINDINGS:
            self.items.append(message)


class VerificationService:
    """Runs the named verification suites."""

    def __init__(
        self,
        max_workers: int = 1,
        max_copies: int = DEFAULT_MAX_COPIES,
        tolerance: float = RATIO_TOLERANCE,
        kvol_lmax: Optional[float] = None,
    ):
        """``kvol_lmax`` replaces the default search window of every suite."""
        self.max_workers = max_workers
        self.max_copies = max_copies
        self.tolerance = tolerance
        self.kvol_lmax = kvol_lmax

    def run(self, suite: str) -> VerificationReportModel:
        runners: Dict[str, Callable[[], List[CheckModel]]] = {
            "decagon": lambda: self.ngon_checks(10),
            "ngon14": lambda: self.ngon_checks(14),
            "ngon-mod4": self.ngon_mod4_checks,
            "bm": self.bouw_moller_checks,
        }
        if suite not in runners:
            raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
        checks = runners[suite]()
        report = VerificationReportModel(
            suite=suite,
            passed=all(check.passed for check in checks if check.gating),
            checks=checks,
        )
        logger.info(
            "suite_finished",
            suite=suite,
            passed=report.passed,
            failed=[c.name for c in checks if c.gating and not c.passed],
        )
        return report

    # -- helpers ----------------------------------------------------------------

    def _enumerate(
        self, surface: TranslationSurface, lmax: float
    ) -> List[SaddleConnection]:
        return enumerate_saddle_connections(
            surface, lmax, max_copies=self.max_copies, max_workers=self.max_workers
        )

    def _config(self, lmax: float, max_components: Optional[int]) -> SearchConfig:
        return SearchConfig(
            lmax=lmax,
            max_components=max_components,
            tolerance=self.tolerance,
            max_copies=self.max_copies,
            max_workers=self.max_workers,
        )

    def _singularity_check(
        self,
        name: str,
        surface: TranslationSurface,
        count: int,
        cone_angle: Optional[float] = None,
    ) -> CheckModel:
        angles = [s.cone_angle for s in surface.singularities]
        passed = len(angles) == count and (
            cone_angle is None
            or all(math.isclose(a, cone_angle, abs_tol=1e-9) for a in angles)
        )
        return CheckModel(
            name=name,
            passed=passed,
            details={"singularities": len(angles), "cone_angles": angles},
        )

    # -- regular n-gons, n = 2 mod 4 --------------------------------------------

    def ngon_checks(self, n: int) -> List[CheckModel]:
        windows = NGON_WINDOWS[n]
        surface = regular_ngon(n)
        kvol_lmax = self.kvol_lmax or windows.kvol
        top = max(windows.lengths, windows.table, windows.lemmas, kvol_lmax)
        connections = self._enumerate(surface, top)
        diagrams = SectorDiagrams(surface)
        window = _within(connections, windows.lengths)
        decompositions = [subdivide(surface, sc, diagrams) for sc in window]
        types = [classify_type(surface, sc, diagrams) for sc in window]

        checks = [
            self._singularity_check(
                "singularity_structure",
                surface,
                count=2,
                cone_angle=(n - 2) * math.pi / 2.0,
            ),
            self._length_check(n, window, decompositions, types),
            self._trip_check(n, decompositions),
            self._long_segment_check(n, decompositions),
            self._catalogue_check(n, window),
            self._table_check(surface, _within(connections, windows.table), diagrams),
            self._cylinder_check(surface, windows.cylinders),
        ]
        lemmas = verify_case_lemmas(
            surface, windows.lemmas, _within(connections, windows.lemmas), diagrams
        )
        checks.extend(lemma_checks(lemmas))
        kvol = sup_ratio(
            surface, self._config(kvol_lmax, 2), _within(connections, kvol_lmax)
        )
        checks.append(
            self._kvol_check(
                "max_ratio",
                kvol,
                expected=0.5 / surface.l0**2,
                achiever_ok=lambda record: record.two_side_pair,
                side_pairs_reach=True,
            )
        )
        if n == 10:
            checks.extend(self._stability_checks(surface))
        return checks

    def _length_check(
        self,
        n: int,
        connections: Sequence[SaddleConnection],
        decompositions: Sequence[Decomposition],
        types: Sequence[int],
    ) -> CheckModel:
        findings = _Findings()
        equalities: List[str] = []
        by_type: Dict[int, int] = {}
        for sc, dec, sc_type in zip(connections, decompositions, types):
            by_type[sc_type] = by_type.get(sc_type, 0) + 1
            bound = length_lower_bound(sc_type, dec.counts.n, n)
            if sc.length < bound - self.tolerance:
                findings.add(
                    f"type {sc_type} {sc.describe()}: length {sc.length:.12f} "
                    f"< {bound:.12f}"
                )
            elif sc_type >= 3 and abs(sc.length - bound) <= self.tolerance:
                equalities.append(sc.describe())
                if not (is_short_diagonal(sc, n) or is_longest_diagonal(sc, n)):
                    findings.add(f"equality off the diagonals: {sc.describe()}")
        return CheckModel(
            name="length_bounds",
            passed=findings.total == 0,
            details={
                "checked": len(connections),
                "by_type": {str(k): v for k, v in sorted(by_type.items())},
                "equalities": sorted(set(equalities)),
                "violations": findings.total,
            },
            findings=findings.items,
        )

    def _trip_check(
        self, n: int, decompositions: Sequence[Decomposition]
    ) -> CheckModel:
        findings = _Findings()
        checked = refined = refined_holds = 0
        for dec in decompositions:
            for trip in dec.trips.trips:
                checked += 1
                bound = trip_bound(trip.p, trip.q, n)
                if trip.length < bound - self.tolerance:
                    findings.add(
                        f"{dec.connection.describe()} trip (p={trip.p}, q={trip.q}): "
                        f"{trip.length:.12f} < {bound:.12f}"
                    )
                if not (trip.starts_at_vertex or trip.ends_at_vertex):
                    refined += 1
                    tighter = refined_trip_bound(trip.p, trip.q, n)
                    if trip.length >= tighter - self.tolerance:
                        refined_holds += 1
        return CheckModel(
            name="trip_bounds",
            passed=findings.total == 0,
            details={
                "trips": checked,
                "free_trips": refined,
                "free_trips_meeting_refined_bound": refined_holds,
            },
            findings=findings.items,
        )

    def _long_segment_check(
        self, n: int, decompositions: Sequence[Decomposition]
    ) -> CheckModel:
        findings = _Findings()
        checked = 0
        bound = long_segment_bound(n)
        for dec in decompositions:
            if dec.diagram is None:
                continue
            for segment in dec.segments:
                if not long_segment_check(segment, dec.diagram):
                    continue
                checked += 1
                if segment.length < bound - self.tolerance:
                    findings.add(
                        f"{dec.connection.describe()} segment {segment.index}: "
                        f"{segment.length:.12f} < {bound:.12f}"
                    )
        return CheckModel(
            name="long_segments",
            passed=findings.total == 0,
            gating=False,
            details={"checked": checked, "bound": bound},
            findings=findings.items,
        )

    def _catalogue_check(
        self, n: int, connections: Sequence[SaddleConnection]
    ) -> CheckModel:
        counts, unmatched = catalogue_check(connections, n)
        findings = [f"unmatched diagonal {sc.describe()}" for sc in unmatched]
        if n == 10:
            lengths = diagonal_lengths(10)
            for k, closed_form in DECAGON_DIAGONALS.items():
                if not math.isclose(closed_form, lengths[k], abs_tol=1e-12):
                    findings.append(
                        f"closed form of step {k}: {closed_form!r} != {lengths[k]!r}"
                    )
        return CheckModel(
            name="diagonal_catalogue",
            passed=not findings and set(counts) == set(diagonal_lengths(n)),
            details={"counts": {str(k): v for k, v in counts.items()}},
            findings=findings[:MAX_FINDINGS],
        )

    def _table_check(
        self,
        surface: TranslationSurface,
        connections: Sequence[SaddleConnection],
        diagrams: SectorDiagrams,
    ) -> CheckModel:
        scs = _undirected(surface, connections)
        matrix = crossing_matrix(surface, scs)
        decs = [subdivide(surface, sc, diagrams) for sc in scs]
        types = [classify_type(surface, sc, diagrams) for sc in scs]
        findings = _Findings()
        checked = excluded = sharp = 0
        for a, b in combinations(range(len(scs)), 2):
            if matrix.overlap[a, b]:
                excluded += 1
                continue
            na, nb = decs[a].counts.n, decs[b].counts.n
            qa, qb = decs[a].counts.q, decs[b].counts.q
            check = IntersectionCheck(
                count=int(matrix.geometric[a, b]),
                types=(types[a], types[b]),
                counts=(na, nb),
                sandwiched=(qa, qb),
                table_bound=intersection_bound(types[a], na, types[b], nb),
                cylinder_bound=big_cylinder_bound(types[a], na, qa, types[b], nb, qb),
            )
            checked += 1
            if check.count == check.table_bound:
                sharp += 1
            for finding in check.findings():
                findings.add(f"{scs[a].describe()} x {scs[b].describe()}: {finding}")
        return CheckModel(
            name="intersection_table",
            passed=findings.total == 0,
            details={
                "pairs": checked,
                "excluded_overlaps": excluded,
                "table_equalities": sharp,
                "violations": findings.total,
            },
            findings=findings.items,
        )

    def _cylinder_check(self, surface: TranslationSurface, expected: int) -> CheckModel:
        """Every side direction splits the surface into ``expected`` cylinders."""
        findings = _Findings()
        counts: Dict[str, int] = {}
        moduli: List[float] = []
        for direction in side_directions(surface):
            try:
                decomposition = cylinder_decomposition(surface, direction)
            except (CylinderDecompositionError, NonPeriodicDirectionError) as e:
                findings.add(f"direction {direction:.9f}: {e}")
                continue
            count = len(decomposition.cylinders)
            counts[f"{direction:.9f}"] = count
            if direction == 0.0:
                moduli = [c.modulus for c in decomposition.cylinders]
            if count != expected:
                findings.add(
                    f"direction {direction:.9f}: {count} cylinders, expected {expected}"
                )
            if not math.isclose(decomposition.total_area, surface.area, rel_tol=1e-6):
                findings.add(
                    f"direction {direction:.9f}: area {decomposition.total_area:.9f}"
                    f" != {surface.area:.9f}"
                )
        return CheckModel(
            name="side_direction_cylinders",
            passed=findings.total == 0 and bool(counts),
            details={
                "cylinders": counts,
                "expected": expected,
                "horizontal_moduli": moduli,
                "failures": findings.total,
            },
            findings=findings.items,
        )

    def _kvol_check(
        self,
        name: str,
        report: KVolReport,
        expected: float,
        achiever_ok: Optional[Callable[[PairRecord], bool]] = None,
        side_pairs_reach: bool = False,
        side_witness: bool = False,
    ) -> CheckModel:
        """Compare the maximum with ``expected`` and inspect the achievers.

        ``side_pairs_reach`` also asks every pair of l0-side curves meeting
        twice to reach the maximum; ``side_witness`` asks for at least one
        such achiever.
        """
        findings: List[str] = []
        if abs(report.max_ratio - expected) > self.tolerance:
            findings.append(f"max ratio {report.max_ratio!r} != {expected!r}")
        if not report.verified:
            findings.append("an achiever failed the independent recount")
        if report.truncated:
            findings.append(
                f"{report.truncated} achievers beyond the recount limit "
                "were not verified"
            )
        if achiever_ok is not None:
            findings.extend(
                f"unexpected achiever {record.first_curve} | {record.second_curve}"
                for record in report.achievers
                if not achiever_ok(record)
            )
        if side_pairs_reach:
            if not report.side_pairs:
                findings.append("no pair of two-side curves meets twice")
            findings.extend(
                f"two-side pair ({first}, {second}) stays below the maximum"
                for first, second in report.missing_side_pairs
            )
        if side_witness and not any(
            record.two_side_pair
            and math.isclose(record.first_length, 2.0 * report.l0, rel_tol=1e-9)
            and math.isclose(record.second_length, 2.0 * report.l0, rel_tol=1e-9)
            for record in report.achievers
        ):
            findings.append("no achiever is made of two l0-sides meeting twice")
        return CheckModel(
            name=name,
            passed=not findings,
            details={
                "surface": report.surface,
                "lmax": report.lmax,
                "max_components": report.max_components,
                "max_ratio": report.max_ratio,
                "expected": expected,
                "achievers": len(report.achievers),
                "truncated": report.truncated,
                "side_pairs": len(report.side_pairs),
                "curves": report.curves,
                "area_sup": report.area_sup,
                "closed_form": report.closed_form,
                "closed_form_matches": report.closed_form_matches,
                "excluded_overlaps": report.excluded,
            },
            findings=findings[:MAX_FINDINGS],
        )

    def _stability_checks(self, surface: TranslationSurface) -> List[CheckModel]:
        config = self._config(4.0, 2)
        scale = scale_invariance_check(surface, config, factor=2.0)
        steps = monotonicity_check(surface, config, [2.0, 3.0, 4.0])
        ratios = [ratio for _, ratio in steps]
        return [
            CheckModel(
                name="scale_invariance",
                passed=scale.passed,
                details={
                    "factor": scale.factor,
                    "normalized_ratio": scale.base.normalized_ratio,
                    "scaled_normalized_ratio": scale.scaled.normalized_ratio,
                    "area_sup": scale.base.area_sup,
                    "scaled_area_sup": scale.scaled.area_sup,
                },
            ),
            CheckModel(
                name="lmax_monotonicity",
                passed=all(
                    later >= earlier - self.tolerance
                    for earlier, later in zip(ratios, ratios[1:])
                )
                and all(abs(r - 0.5) <= self.tolerance for r in ratios),
                details={"steps": [list(step) for step in steps]},
            ),
        ]

    # -- regular n-gons, n = 0 mod 4 --------------------------------------------

    def ngon_mod4_checks(self) -> List[CheckModel]:
        checks: List[CheckModel] = []
        lmax = self.kvol_lmax or 6.0
        for n in (8, 12):
            surface = regular_ngon(n)
            checks.append(
                self._singularity_check(f"ngon{n}_singularities", surface, count=1)
            )
            report = sup_ratio(surface, self._config(lmax, None))
            checks.append(
                self._kvol_check(
                    f"ngon{n}_max_ratio",
                    report,
                    expected=1.0 / surface.l0**2,
                    achiever_ok=lambda r: r.first_sides
                    and r.second_sides
                    and abs(r.algebraic) == 1,
                )
            )
        return checks

    # -- Bouw-Moller surfaces ---------------------------------------------------

    def bouw_moller_checks(self) -> List[CheckModel]:
        checks: List[CheckModel] = []
        for m, n in BM_SINGULARITY_CASES:
            checks.append(
                self._singularity_check(
                    f"bm_{m}_{n}_singularities", bouw_moller(m, n), math.gcd(m, n)
                )
            )
        for m, n in BM_WITNESS_CASES:
            checks.append(self._witness_check(m, n))
        checks.append(self._gcd_n_check(8, 4))

        surface = bouw_moller(4, 8)
        lmax = self.kvol_lmax or 5.0 * surface.l0
        report = sup_ratio(surface, self._config(lmax, 2))
        checks.append(
            self._kvol_check(
                "bm_4_8_max_ratio",
                report,
                expected=0.5 / surface.l0**2,
                side_witness=True,
            )
        )
        checks.append(self._bm_length_check(8, 8, gating=True))
        checks.append(self._bm_length_check(4, 8, gating=False))
        checks.append(self._bm_intersection_check(4, 8, lmax=3.0))
        return checks

    def _witness_check(self, m: int, n: int) -> CheckModel:
        name = f"bm_{m}_{n}_witness"
        l0 = bouw_moller(m, n).l0
        try:
            pair = construct_witness_pair_bm(m, n)
        except (WitnessPreconditionError, WitnessConstructionError) as e:
            return CheckModel(name=name, passed=False, findings=[str(e)])
        lengths = (pair.first.length, pair.second.length)
        passed = (
            abs(pair.report.algebraic) == 2
            and all(math.isclose(x, 2.0 * l0, abs_tol=1e-9) for x in lengths)
            and math.isclose(pair.ratio, 0.5 / l0**2, abs_tol=self.tolerance)
        )
        return CheckModel(
            name=name,
            passed=passed,
            details={
                "first": pair.first.describe(),
                "second": pair.second.describe(),
                "algebraic": pair.report.algebraic,
                "lengths": list(lengths),
                "ratio": pair.ratio,
            },
        )

    def _gcd_n_check(self, m: int, n: int) -> CheckModel:
        try:
            construct_witness_pair_bm(m, n)
        except WitnessPreconditionError as e:
            return CheckModel(
                name=f"bm_{m}_{n}_rejected", passed=True, details={"error": str(e)}
            )
        return CheckModel(
            name=f"bm_{m}_{n}_rejected",
            passed=False,
            findings=["gcd(m, n) = n was accepted"],
        )

    def _bm_length_check(self, m: int, n: int, gating: bool) -> CheckModel:
        surface = bouw_moller(m, n)
        l0 = surface.l0
        findings = _Findings()
        grouping = _Findings()
        checked = 0
        for sc in self._enumerate(surface, 6.0 * l0):
            if is_end_polygon_side(surface, sc):
                continue
            dec = bm_subdivide(surface, sc)
            checked += 1
            for finding in dec.findings:
                grouping.add(f"{sc.describe()}: {finding}")
            bound = bm_length_bound(dec.counts.n) * l0
            if sc.length < bound - self.tolerance:
                findings.add(
                    f"{sc.describe()} n={dec.counts.n}: {sc.length:.12f} "
                    f"< {bound:.12f}"
                )
        return CheckModel(
            name=f"bm_{m}_{n}_length_bound",
            passed=findings.total == 0 and grouping.total == 0,
            gating=gating,
            details={
                "checked": checked,
                "violations": findings.total,
                "grouping_findings": grouping.total,
            },
            findings=findings.items + grouping.items,
        )

    def _bm_intersection_check(self, m: int, n: int, lmax: float) -> CheckModel:
        surface = bouw_moller(m, n)
        scs = _undirected(surface, self._enumerate(surface, lmax * surface.l0))
        matrix = crossing_matrix(surface, scs)
        decs = [bm_subdivide(surface, sc) for sc in scs]
        odd = [is_odd_saddle_connection(dec) for dec in decs]
        findings = _Findings()
        checked = 0
        for a, b in combinations(range(len(scs)), 2):
            if matrix.overlap[a, b]:
                continue
            check = BMIntersectionCheck(
                count=int(matrix.geometric[a, b]),
                counts=(decs[a].counts.n, decs[b].counts.n),
                odd=(odd[a], odd[b]),
            )
            checked += 1
            if not check.passed:
                findings.add(
                    f"{scs[a].describe()} x {scs[b].describe()}: "
                    f"{check.count} > n·n = {check.bound}"
                    if check.count > check.bound
                    else f"{scs[a].describe()} x {scs[b].describe()}: "
                    "equality without two odd connections"
                )
        return CheckModel(
            name=f"bm_{m}_{n}_intersection_bound",
            passed=findings.total == 0,
            gating=False,
            details={"pairs": checked, "violations": findings.total},
            findings=findings.items,
        )
