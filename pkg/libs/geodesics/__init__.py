"""Saddle connection enumeration, straight-line flow and cylinder decompositions."""

from .base import (
    DEDUP_DECIMALS,
    DEFAULT_MAX_COPIES,
    Crossing,
    Cylinder,
    CylinderDecomposition,
    CylinderDecompositionError,
    Endpoint,
    EnumerationBudgetError,
    NonPeriodicDirectionError,
    Piece,
    SaddleConnection,
)
from .connections import (
    build_connection,
    crossing_pieces,
    find_by_holonomy,
    reverse_connection,
    reverse_index,
    side_connection,
)
from .cylinders import cylinder_decomposition, cylinder_regions, side_directions
from .enumeration import (
    SaddleConnectionEnumerator,
    cutting_sequence,
    enumerate_saddle_connections,
)
from .flow import FlowStep, FlowTrace, trace_ray

__all__ = [
    "DEDUP_DECIMALS",
    "DEFAULT_MAX_COPIES",
    "Crossing",
    "Cylinder",
    "CylinderDecomposition",
    "CylinderDecompositionError",
    "Endpoint",
    "EnumerationBudgetError",
    "FlowStep",
    "FlowTrace",
    "NonPeriodicDirectionError",
    "Piece",
    "SaddleConnection",
    "SaddleConnectionEnumerator",
    "build_connection",
    "crossing_pieces",
    "cutting_sequence",
    "cylinder_decomposition",
    "cylinder_regions",
    "enumerate_saddle_connections",
    "find_by_holonomy",
    "reverse_connection",
    "reverse_index",
    "side_connection",
    "side_directions",
    "trace_ray",
]
