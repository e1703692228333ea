"""Sectors, transition diagrams and segment records."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from libs.geodesics import Crossing, SaddleConnection

SANDWICHED = "sandwiched"
NON_SANDWICHED = "non-sandwiched"
INITIAL = "initial"
TERMINAL = "terminal"

ADJACENT = "adjacent"
NON_ADJACENT = "non-adjacent"

LONG_CLASSES = ("a", "b", "c", "d", "e", "f")
SHORT_CLASSES = ("g", "h", "i")
NO_CLASS = "none"


class TransitionDiagramError(RuntimeError):
    """Raised when the side-adjacency graph of a sector is not a path with a loop."""


class SegmentGroupingError(RuntimeError):
    """Raised when Bouw-Moller segment groups overlap or pair with a short segment."""


@dataclass(frozen=True)
class Sector:
    """Open interval of directions (iπ/n, (i+1)π/n)."""

    index: int
    n: int

    @property
    def lo(self) -> float:
        return self.index * math.pi / self.n

    @property
    def hi(self) -> float:
        return (self.index + 1) * math.pi / self.n

    def contains(self, theta: float) -> bool:
        return self.lo < theta % math.pi < self.hi

    def generic_direction(self) -> float:
        # off-centre so the sample rays avoid the symmetry axis of the sector
        return self.lo + 0.4637 * (self.hi - self.lo)


@dataclass
class TransitionDiagram:
    """Path σ(1) - σ(2) - ... - σ(n/2) with a loop at σ(n/2)."""

    sector: Sector
    sigma: Tuple[str, ...]
    graph: nx.Graph = field(repr=False)

    def rank(self, label: str) -> int:
        """1-based position of ``label`` in σ."""
        return self.sigma.index(label) + 1

    @property
    def sandwiched_label(self) -> str:
        return self.sigma[0]

    @property
    def loop_label(self) -> str:
        return self.sigma[-1]


@dataclass(frozen=True)
class Segment:
    """Part of a saddle connection between two cut points.

    ``start``/``end`` are the crossings bounding the segment, None for a
    singular endpoint. ``interior`` holds the crossings strictly inside.
    """

    index: int
    kind: str
    start: Optional[Crossing]
    end: Optional[Crossing]
    interior: Tuple[Crossing, ...]
    start_position: float
    end_position: float
    length: float
    polygon_id: Optional[int] = None
    adjacency: Optional[str] = None
    bm_class: str = NO_CLASS

    @property
    def crossings(self) -> Tuple[Crossing, ...]:
        """Crossings touched by the segment, endpoints included."""
        head = (self.start,) if self.start is not None else ()
        tail = (self.end,) if self.end is not None else ()
        return head + self.interior + tail


@dataclass(frozen=True)
class SegmentCounts:
    """n = p + q; on the n-gon p counts non-sandwiched and q sandwiched segments."""

    n: int
    p: int
    q: int


@dataclass(frozen=True)
class Trip:
    """Maximal run of segments through the short cylinder of a sector."""

    first: int
    last: int
    p: int
    q: int
    length: float
    starts_at_vertex: bool
    ends_at_vertex: bool


@dataclass(frozen=True)
class TripSummary:
    trips: Tuple[Trip, ...] = ()

    @property
    def as_pairs(self) -> List[Tuple[int, int]]:
        return [(trip.p, trip.q) for trip in self.trips]


@dataclass
class Decomposition:
    """Segments of one saddle connection on a regular n-gon."""

    connection: SaddleConnection
    sector: Optional[Sector]
    segments: List[Segment]
    counts: SegmentCounts
    trips: TripSummary
    diagram: Optional[TransitionDiagram] = field(default=None, repr=False)


@dataclass(frozen=True)
class SegmentGroup:
    """Segments whose combined length is bounded below together.

    ``units`` is the number of counted units (non-adjacent segments and
    adjacent pairs) in the group.
    """

    members: Tuple[int, ...]
    units: int
    length: float
    reason: str


@dataclass
class BMDecomposition:
    """Polygonal decomposition of a saddle connection on S_{m,n}."""

    connection: SaddleConnection
    segments: List[Segment]
    counts: SegmentCounts
    pairs: List[Tuple[int, int]]
    groups: List[SegmentGroup]
    findings: List[str] = field(default_factory=list)

    @property
    def classes(self) -> Dict[int, str]:
        return {segment.index: segment.bm_class for segment in self.segments}
