"""Saddle connection enumeration by unfolding polygon copies."""

import math
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional, Tuple

import numpy as np
import structlog

from libs.surface import EPS_ANG, EPS_LEN, Placement, TranslationSurface
from libs.surface.base import CornerRef

from .base import DEFAULT_MAX_COPIES, EnumerationBudgetError, SaddleConnection
from .connections import build_connection

logger = structlog.get_logger()


@dataclass
class _Wedge:
    """A placed polygon copy seen from the base singularity through an open wedge."""

    placement: Placement
    entry_edge: Optional[int]
    lo: float
    hi: float
    parent: Optional["_Wedge"]
    exit_from_parent: Optional[int]

    def exits(self) -> List[int]:
        chain: List[int] = []
        node: Optional[_Wedge] = self
        while node is not None and node.exit_from_parent is not None:
            chain.append(node.exit_from_parent)
            node = node.parent
        chain.reverse()
        return chain


def _segment_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance from the origin to the segment [a, b]."""
    edge = b - a
    denom = float(np.dot(edge, edge))
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, -float(np.dot(a, edge)) / denom))
    closest = a + t * edge
    return float(math.hypot(closest[0], closest[1]))


class SaddleConnectionEnumerator:
    """Breadth-first unfolding from every corner of every singularity.

    Each corner's wedge is half-open [lo, hi) so each outgoing ray belongs
    to exactly one corner; wedges of later copies are open.
    """

    def __init__(
        self,
        surface: TranslationSurface,
        eps_len: float = EPS_LEN,
        eps_ang: float = EPS_ANG,
        max_copies: int = DEFAULT_MAX_COPIES,
        max_workers: Optional[int] = None,
    ):
        """Initialize the enumerator for a built surface."""
        self.surface = surface
        self.eps_len = eps_len
        self.eps_ang = eps_ang
        self.max_copies = max_copies
        self.max_workers = max_workers or 1
        self._copies = 0
        self._lock = threading.Lock()

    def enumerate(self, lmax: float) -> List[SaddleConnection]:
        """All oriented saddle connections of length at most ``lmax``."""
        if lmax <= 0:
            raise ValueError(f"lmax must be positive, got {lmax}")
        self._copies = 0
        corners = [
            record.corner
            for singularity in self.surface.singularities
            for record in singularity.fan
        ]
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                batches = list(
                    executor.map(lambda c: self._from_corner(c, lmax), corners)
                )
        else:
            batches = [self._from_corner(corner, lmax) for corner in corners]

        unique: Dict[Tuple, SaddleConnection] = {}
        for batch in batches:
            for sc in batch:
                unique.setdefault(sc.key, sc)
        connections = sorted(unique.values(), key=lambda sc: sc.sort_key)
        logger.info(
            "enumeration_complete",
            lmax=lmax,
            connections=len(connections),
            copies=self._copies,
        )
        return connections

    def _charge(self, amount: int) -> None:
        with self._lock:
            self._copies += amount
            if self._copies > self.max_copies:
                logger.error(
                    "enumeration_budget_exceeded",
                    copies=self._copies,
                    max_copies=self.max_copies,
                )
                raise EnumerationBudgetError(
                    f"unfolding needs more than {self.max_copies} polygon copies"
                )

    def _from_corner(self, corner: CornerRef, lmax: float) -> List[SaddleConnection]:
        surface = self.surface
        eps = self.eps_ang
        pid, vertex = corner
        polygon = surface.polygon(pid)
        origin = polygon.vertex(vertex)
        heading = polygon.edges[vertex] / polygon.edge_lengths[vertex]
        hx, hy = float(heading[0]), float(heading[1])

        root = _Wedge(
            placement=Placement(pid, (-float(origin[0]), -float(origin[1]))),
            entry_edge=None,
            lo=0.0,
            hi=polygon.interior_angle(vertex),
            parent=None,
            exit_from_parent=None,
        )
        queue: Deque[_Wedge] = deque([root])
        found: List[SaddleConnection] = []
        processed = 0
        while queue:
            node = queue.popleft()
            processed += 1
            if processed % 4096 == 0:
                self._charge(4096)
            initial = node.parent is None
            current = surface.polygon(node.placement.polygon_id)
            points = current.points + np.asarray(node.placement.offset)
            xs, ys = points[:, 0], points[:, 1]
            # angles from the wedge bisector; the copy lies in a half-plane
            # around the wedge, so none of its vertices wraps past ±π
            mid = 0.5 * (node.lo + node.hi)
            cx = hx * math.cos(mid) - hy * math.sin(mid)
            cy = hx * math.sin(mid) + hy * math.cos(mid)
            rel = mid + np.arctan2(cx * ys - cy * xs, cx * xs + cy * ys)
            dist = np.hypot(xs, ys)
            size = current.size

            for j in range(size):
                if initial and j == vertex:
                    continue
                r = float(rel[j])
                if initial:
                    inside = node.lo - eps <= r < node.hi - eps
                else:
                    inside = node.lo + eps < r < node.hi - eps
                if inside and dist[j] <= lmax + self.eps_len:
                    found.append(
                        build_connection(surface, corner, node.exits(), j)
                    )

            for edge in range(size):
                if edge == node.entry_edge:
                    continue
                nxt = (edge + 1) % size
                if initial and vertex in (edge, nxt):
                    continue
                ra, rb = float(rel[edge]), float(rel[nxt])
                if rb <= ra:
                    continue
                lo, hi = max(node.lo, ra), min(node.hi, rb)
                if hi - lo <= eps:
                    continue
                reach = _segment_distance(points[edge], points[nxt])
                if reach > lmax + self.eps_len:
                    continue
                child = surface.develop_across(node.placement, edge)
                entry = surface.partner((node.placement.polygon_id, edge))[1]
                queue.append(
                    _Wedge(
                        placement=child,
                        entry_edge=entry,
                        lo=lo,
                        hi=hi,
                        parent=node,
                        exit_from_parent=edge,
                    )
                )
        self._charge(processed % 4096)
        logger.debug(
            "corner_enumerated", corner=corner, copies=processed, found=len(found)
        )
        return found


def enumerate_saddle_connections(
    surface: TranslationSurface,
    lmax: float,
    max_copies: int = DEFAULT_MAX_COPIES,
    max_workers: Optional[int] = None,
    eps_len: float = EPS_LEN,
    eps_ang: float = EPS_ANG,
) -> List[SaddleConnection]:
    """Every oriented saddle connection of length <= ``lmax``.

    Sorted by (length, angle); identical for any worker count.
    """
    enumerator = SaddleConnectionEnumerator(
        surface,
        eps_len=eps_len,
        eps_ang=eps_ang,
        max_copies=max_copies,
        max_workers=max_workers,
    )
    return enumerator.enumerate(lmax)


def cutting_sequence(sc: SaddleConnection) -> List[str]:
    """Labels of the sides crossed, in traversal order."""
    return list(sc.cutting_sequence)
