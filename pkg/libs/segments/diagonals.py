"""Closed-form diagonal lengths of the regular n-gon."""

import math
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

from libs.geodesics import SaddleConnection

PHI_10 = 2.0 * math.cos(math.pi / 10.0)

# diagonal joining vertices k apart on the unit decagon
DECAGON_DIAGONALS: Dict[int, float] = {
    2: PHI_10,
    3: PHI_10**2 - 1.0,
    4: PHI_10**3 - 2.0 * PHI_10,
    5: PHI_10**4 - 3.0 * PHI_10**2 + 1.0,
}


def diagonal_lengths(n: int) -> Dict[int, float]:
    """Length sin(kπ/n)/sin(π/n) of the chord joining vertices k apart."""
    return {
        k: math.sin(k * math.pi / n) / math.sin(math.pi / n)
        for k in range(2, n // 2 + 1)
    }


def match_diagonal(
    sc: SaddleConnection, n: int, tol: float = 1e-7
) -> Optional[int]:
    """Vertex step k of a diagonal connection, None for anything else."""
    if sc.crossings or sc.is_side:
        return None
    for k, length in diagonal_lengths(n).items():
        if abs(sc.length - length) <= tol:
            return k
    return None


def catalogue_check(
    connections: Sequence[SaddleConnection], n: int, tol: float = 1e-7
) -> Tuple[Dict[int, int], List[SaddleConnection]]:
    """Count enumerated diagonals per vertex step; also return the unmatched ones."""
    counts: Counter = Counter()
    unmatched: List[SaddleConnection] = []
    for sc in connections:
        if sc.crossings or sc.is_side:
            continue
        k = match_diagonal(sc, n, tol)
        if k is None:
            unmatched.append(sc)
        else:
            counts[k] += 1
    return dict(sorted(counts.items())), unmatched
