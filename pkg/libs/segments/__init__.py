"""Sectors, transition diagrams and segment decompositions of saddle connections."""

from .base import (
    ADJACENT,
    INITIAL,
    LONG_CLASSES,
    NO_CLASS,
    NON_ADJACENT,
    NON_SANDWICHED,
    SANDWICHED,
    SHORT_CLASSES,
    TERMINAL,
    BMDecomposition,
    Decomposition,
    Sector,
    Segment,
    SegmentCounts,
    SegmentGroup,
    SegmentGroupingError,
    TransitionDiagram,
    TransitionDiagramError,
    Trip,
    TripSummary,
)
from .bouw_moller import (
    bm_length_bound,
    bm_subdivide,
    is_end_polygon_side,
    is_odd_saddle_connection,
    pair_g_bound,
    pair_h_bound,
)
from .diagonals import (
    DECAGON_DIAGONALS,
    catalogue_check,
    diagonal_lengths,
    match_diagonal,
)
from .sectors import SectorDiagrams, sector_index, transition_diagram
from .subdivision import (
    DECAGON_LONG_DIAGONAL,
    DECAGON_LONG_DIAGONAL_STATED,
    EPS_0,
    EPS_1,
    EPS_1_EFFECTIVE,
    classify_type,
    delta_holonomies,
    in_big_cylinder,
    is_delta,
    is_longest_diagonal,
    is_short_diagonal,
    length_lower_bound,
    long_segment_bound,
    long_segment_check,
    reassembled_crossings,
    refined_trip_bound,
    subdivide,
    trip_bound,
)

__all__ = [
    "ADJACENT",
    "DECAGON_DIAGONALS",
    "DECAGON_LONG_DIAGONAL",
    "DECAGON_LONG_DIAGONAL_STATED",
    "EPS_0",
    "EPS_1",
    "EPS_1_EFFECTIVE",
    "INITIAL",
    "LONG_CLASSES",
    "NON_ADJACENT",
    "NON_SANDWICHED",
    "NO_CLASS",
    "SANDWICHED",
    "SHORT_CLASSES",
    "TERMINAL",
    "BMDecomposition",
    "Decomposition",
    "Sector",
    "SectorDiagrams",
    "Segment",
    "SegmentCounts",
    "SegmentGroup",
    "SegmentGroupingError",
    "TransitionDiagram",
    "TransitionDiagramError",
    "Trip",
    "TripSummary",
    "bm_length_bound",
    "bm_subdivide",
    "catalogue_check",
    "classify_type",
    "delta_holonomies",
    "diagonal_lengths",
    "in_big_cylinder",
    "is_delta",
    "is_longest_diagonal",
    "is_end_polygon_side",
    "is_odd_saddle_connection",
    "is_short_diagonal",
    "length_lower_bound",
    "long_segment_bound",
    "long_segment_check",
    "match_diagonal",
    "pair_g_bound",
    "pair_h_bound",
    "reassembled_crossings",
    "refined_trip_bound",
    "sector_index",
    "subdivide",
    "transition_diagram",
    "trip_bound",
]
