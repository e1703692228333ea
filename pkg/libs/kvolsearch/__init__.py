"""Maximal interaction strength search and extremal-pair constructions."""

from .base import (
    RATIO_TOLERANCE,
    CaseLemmaReport,
    ConjectureReport,
    KVolReport,
    LemmaResult,
    PairRecord,
    ScaleCheck,
    SearchConfig,
    WitnessConstructionError,
    WitnessPair,
    WitnessPreconditionError,
)
from .lemmas import verify_case_lemmas
from .search import (
    enumerate_closed_curves,
    fold_orientations,
    kvol_closed_form,
    monotonicity_check,
    scale_invariance_check,
    shortest_side,
    sup_ratio,
)
from .witness import construct_witness_pair_bm, explore_conjecture, polygon_sides

__all__ = [
    "RATIO_TOLERANCE",
    "CaseLemmaReport",
    "ConjectureReport",
    "KVolReport",
    "LemmaResult",
    "PairRecord",
    "ScaleCheck",
    "SearchConfig",
    "WitnessConstructionError",
    "WitnessPair",
    "WitnessPreconditionError",
    "construct_witness_pair_bm",
    "enumerate_closed_curves",
    "explore_conjecture",
    "fold_orientations",
    "kvol_closed_form",
    "monotonicity_check",
    "polygon_sides",
    "scale_invariance_check",
    "shortest_side",
    "sup_ratio",
    "verify_case_lemmas",
]
