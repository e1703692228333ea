"""Closed curves, intersection records and errors."""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from libs.geodesics import SaddleConnection
from libs.surface.base import Point


class CurveValidationError(ValueError):
    """Raised when components do not chain into a closed curve."""


class OverlapError(RuntimeError):
    """Raised when two curves share a sub-segment of positive length."""


class DegenerateSingularError(RuntimeError):
    """Raised when two curves leave or enter a singularity along the same ray."""


@dataclass(frozen=True)
class Junction:
    """Passage of a closed curve through a singularity.

    ``incoming`` is the angular coordinate of the ray pointing back along
    the arriving component, ``outgoing`` the one of the leaving component.
    """

    singularity: int
    incoming: float
    outgoing: float


@dataclass(frozen=True)
class ClosedCurve:
    """Cyclic chain of oriented saddle connections.

    Each singularity is visited at most once, so every junction carries a
    single sign against another curve.
    """

    components: Tuple[SaddleConnection, ...]
    ids: Tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.components:
            raise CurveValidationError("a closed curve needs at least one component")
        k = len(self.components)
        for j, sc in enumerate(self.components):
            following = self.components[(j + 1) % k]
            if sc.end.singularity != following.start.singularity:
                raise CurveValidationError(
                    f"component {j} ends at z{sc.end.singularity} but component "
                    f"{(j + 1) % k} starts at z{following.start.singularity}"
                )
        visited = [sc.start.singularity for sc in self.components]
        if len(set(visited)) != len(visited):
            raise CurveValidationError(
                f"curve passes a singularity more than once: {visited}"
            )

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def length(self) -> float:
        return sum(sc.length for sc in self.components)

    @property
    def junctions(self) -> Tuple[Junction, ...]:
        k = len(self.components)
        return tuple(
            Junction(
                singularity=self.components[j].start.singularity,
                incoming=self.components[(j - 1) % k].end.coordinate,
                outgoing=self.components[j].start.coordinate,
            )
            for j in range(k)
        )

    def describe(self) -> str:
        return " + ".join(sc.describe() for sc in self.components)


@dataclass(frozen=True)
class InteriorCrossing:
    """Transverse crossing away from the singularities."""

    point: Point
    polygon_id: int
    sign: int
    components: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class SingularContribution:
    singularity: int
    sign: int


@dataclass(frozen=True)
class IntersectionReport:
    """Signed crossings of two closed curves."""

    interior: Tuple[InteriorCrossing, ...] = ()
    singular: Tuple[SingularContribution, ...] = ()

    @property
    def interior_sum(self) -> int:
        return sum(crossing.sign for crossing in self.interior)

    @property
    def singular_sum(self) -> int:
        return sum(contribution.sign for contribution in self.singular)

    @property
    def algebraic(self) -> int:
        return self.interior_sum + self.singular_sum

    @property
    def geometric(self) -> int:
        nonzero = sum(1 for contribution in self.singular if contribution.sign)
        return len(self.interior) + nonzero


@dataclass(frozen=True)
class CrossingMatrix:
    """Pairwise crossing data of a list of saddle connections.

    ``signed[i, j]`` sums the signs of the interior crossings of connection
    i with connection j, ``geometric[i, j]`` counts them and ``overlap[i, j]``
    marks pairs sharing a sub-segment (the diagonal included).
    """

    signed: np.ndarray
    geometric: np.ndarray
    overlap: np.ndarray

    @property
    def size(self) -> int:
        return int(self.signed.shape[0])


@dataclass(frozen=True)
class IntersectionCheck:
    """Interior crossing count of two n-gon connections against their bounds."""

    count: int
    types: Tuple[int, int]
    counts: Tuple[int, int]
    sandwiched: Tuple[int, int]
    table_bound: int
    cylinder_bound: int

    @property
    def table_ok(self) -> bool:
        return self.count <= self.table_bound

    @property
    def cylinder_ok(self) -> bool:
        return self.count <= self.cylinder_bound

    @property
    def passed(self) -> bool:
        return self.table_ok and self.cylinder_ok

    def findings(self) -> List[str]:
        out: List[str] = []
        if not self.table_ok:
            out.append(
                f"types {self.types}: {self.count} crossings exceed the table "
                f"bound {self.table_bound}"
            )
        if not self.cylinder_ok:
            out.append(
                f"types {self.types}: {self.count} crossings exceed "
                f"{self.cylinder_bound} from the segment counts"
            )
        return out


@dataclass(frozen=True)
class BMIntersectionCheck:
    """Interior crossing count of two Bouw-Moller connections against n_α·n_β."""

    count: int
    counts: Tuple[int, int]
    odd: Tuple[bool, bool]

    @property
    def bound(self) -> int:
        return self.counts[0] * self.counts[1]

    @property
    def equality(self) -> bool:
        return self.count == self.bound

    @property
    def passed(self) -> bool:
        if self.count > self.bound:
            return False
        return not self.equality or all(self.odd)
