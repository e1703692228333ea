"""Search configuration, report records and errors for the ratio search."""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from libs.geodesics import DEFAULT_MAX_COPIES
from libs.intersect import ClosedCurve, IntersectionReport

RATIO_TOLERANCE = 1e-9
EXCLUSION_SAMPLE = 10


class WitnessPreconditionError(ValueError):
    """Raised when gcd(m, n) rules out the requested construction."""


class WitnessConstructionError(RuntimeError):
    """Raised when no pair of side curves meets twice with the same sign."""


@dataclass(frozen=True)
class SearchConfig:
    """Pair space of the search.

    ``max_components`` None means one component per singularity.
    """

    lmax: float
    max_components: Optional[int] = None
    tolerance: float = RATIO_TOLERANCE
    max_copies: int = DEFAULT_MAX_COPIES
    max_workers: int = 1
    verify_limit: int = 2000

    def __post_init__(self) -> None:
        if not self.lmax > 0:
            raise ValueError(f"lmax must be positive, got {self.lmax}")
        if self.max_components is not None and self.max_components < 1:
            raise ValueError(
                f"max_components must be at least 1, got {self.max_components}"
            )


@dataclass(frozen=True)
class PairRecord:
    """One evaluated pair of closed curves."""

    first: int
    second: int
    first_curve: str
    second_curve: str
    first_k: int
    second_k: int
    first_sides: bool
    second_sides: bool
    algebraic: int
    interior: int
    singular: Tuple[int, ...]
    first_length: float
    second_length: float

    @property
    def ratio(self) -> float:
        return abs(self.algebraic) / (self.first_length * self.second_length)

    @property
    def two_side_pair(self) -> bool:
        """Both curves are made of two sides and meet at two singularities
        with the same sign."""
        nonzero = [sign for sign in self.singular if sign]
        return (
            self.first_sides
            and self.second_sides
            and self.first_k == 2
            and self.second_k == 2
            and self.interior == 0
            and len(nonzero) == 2
            and nonzero[0] == nonzero[1]
        )


@dataclass
class KVolReport:
    """Maximum of |Int|/(l·l) over the enumerated pair space."""

    surface: str
    lmax: float
    max_components: int
    l0: float
    area: float
    connections: int
    curves: int
    pairs: int
    max_ratio: float
    witness: Optional[PairRecord]
    achievers: List[PairRecord]
    excluded: int = 0
    excluded_sample: List[Tuple[int, int]] = field(default_factory=list)
    verified: bool = True
    closed_form: Optional[float] = None
    truncated: int = 0
    side_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def normalized_ratio(self) -> float:
        """max ratio · l0²."""
        return self.max_ratio * self.l0 * self.l0

    @property
    def area_sup(self) -> float:
        return self.area * self.max_ratio

    @property
    def missing_side_pairs(self) -> List[Tuple[int, int]]:
        """Pairs of l0-side curves meeting twice that are not among the achievers."""
        reached = {(record.first, record.second) for record in self.achievers}
        return [pair for pair in self.side_pairs if pair not in reached]

    @property
    def closed_form_matches(self) -> Optional[bool]:
        if self.closed_form is None:
            return None
        return math.isclose(self.area_sup, self.closed_form, rel_tol=1e-9)


@dataclass(frozen=True)
class LemmaResult:
    """Numerical check of one inequality over every matching triple or pair."""

    name: str
    statement: str
    checked: int
    equalities: int
    max_value: float
    violations: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class CaseLemmaReport:
    n: int
    lmax: float
    lemmas: List[LemmaResult]
    excluded: int = 0

    @property
    def passed(self) -> bool:
        return all(lemma.passed for lemma in self.lemmas)

    def lemma(self, name: str) -> LemmaResult:
        for result in self.lemmas:
            if result.name == name:
                return result
        raise KeyError(name)


@dataclass(frozen=True)
class WitnessPair:
    """Two closed curves made of sides, meeting twice with the same sign."""

    first: ClosedCurve
    second: ClosedCurve
    report: IntersectionReport

    @property
    def ratio(self) -> float:
        return abs(self.report.algebraic) / (self.first.length * self.second.length)


@dataclass
class ConjectureReport:
    """Search output for gcd(m, n) = n, compared with 1/(4·l0²)."""

    m: int
    n: int
    search: KVolReport
    side_ratio: float
    side_witness: Optional[PairRecord]

    @property
    def bound(self) -> float:
        return 1.0 / (4.0 * self.search.l0**2)

    @property
    def exceeds_bound(self) -> bool:
        return self.search.max_ratio > self.bound + RATIO_TOLERANCE

    @property
    def side_pair_matches(self) -> bool:
        return math.isclose(self.side_ratio, self.bound, abs_tol=RATIO_TOLERANCE)


@dataclass(frozen=True)
class ScaleCheck:
    factor: float
    base: KVolReport
    scaled: KVolReport

    @property
    def passed(self) -> bool:
        return math.isclose(
            self.base.normalized_ratio, self.scaled.normalized_ratio, rel_tol=1e-9
        ) and math.isclose(self.base.area_sup, self.scaled.area_sup, rel_tol=1e-9)
