"""Direction sectors of the regular n-gon and their transition diagrams."""

import math
from typing import Dict, Optional, Set, Tuple

import networkx as nx
import numpy as np
import structlog

from libs.geodesics import trace_ray
from libs.surface import EPS_ANG, TranslationSurface

from .base import Sector, TransitionDiagram, TransitionDiagramError

logger = structlog.get_logger()

DEFAULT_SAMPLES = 96


def sector_index(theta: float, n: int, eps: float = EPS_ANG) -> Optional[int]:
    """Index i with θ mod π in (iπ/n, (i+1)π/n); None on a sector boundary."""
    width = math.pi / n
    reduced = theta % math.pi
    ratio = reduced / width
    nearest = round(ratio)
    if abs(reduced - nearest * width) <= eps:
        return None
    return int(math.floor(ratio)) % n


def _follow_pairs(
    surface: TranslationSurface, theta: float, samples: int
) -> Set[Tuple[str, str]]:
    """Label pairs (entry side, exit side) seen by rays of direction ±θ."""
    polygon = surface.polygons[0]
    unit = np.array([math.cos(theta), math.sin(theta)])
    pairs: Set[Tuple[str, str]] = set()
    for edge in range(polygon.size):
        vector = polygon.edges[edge]
        # rays must enter through this edge
        direction = unit if vector[0] * unit[1] - vector[1] * unit[0] > 0 else -unit
        for j in range(samples):
            point = polygon.vertex(edge) + ((j + 0.5) / samples) * vector
            trace = trace_ray(
                surface, polygon.id, point, direction, polygon.diameter * 1.01
            )
            exit_edge = trace.steps[0].exit_edge
            if exit_edge is None:
                continue
            pairs.add((polygon.labels[edge], polygon.labels[exit_edge]))
    return pairs


def transition_diagram(
    surface: TranslationSurface, index: int, samples: int = DEFAULT_SAMPLES
) -> TransitionDiagram:
    """Side-succession graph of sector ``index`` on a regular n-gon, by ray shooting.

    Raises TransitionDiagramError unless the graph is a path with a single
    loop at one end.
    """
    if len(surface.polygons) != 1:
        raise TransitionDiagramError(
            "transition diagrams need a single-polygon surface"
        )
    n = surface.polygons[0].size
    sector = Sector(index % n, n)
    theta = sector.generic_direction()

    graph = nx.Graph()
    graph.add_nodes_from(sorted(set(surface.polygons[0].labels)))
    for first, second in _follow_pairs(surface, theta, samples):
        graph.add_edge(first, second)

    loops = [a for a, _ in nx.selfloop_edges(graph)]
    path = nx.Graph(graph)
    path.remove_edges_from(list(nx.selfloop_edges(path)))
    labels = list(path.nodes)
    is_path = (
        nx.is_connected(path)
        and path.number_of_edges() == len(labels) - 1
        and max(degree for _, degree in path.degree) <= 2
    )
    if len(loops) != 1 or not is_path or path.degree[loops[0]] > 1:
        logger.error(
            "transition_diagram_malformed",
            sector=sector.index,
            loops=loops,
            edges=sorted(path.edges),
        )
        raise TransitionDiagramError(
            f"sector {sector.index} of the {n}-gon: side graph is not a path "
            f"with a terminal loop (loops={loops})"
        )

    loop = loops[0]
    ends = [label for label in labels if path.degree[label] == 1 and label != loop]
    start = ends[0] if ends else loop
    sigma = tuple(nx.shortest_path(path, start, loop))
    logger.debug("transition_diagram", sector=sector.index, sigma=sigma)
    return TransitionDiagram(sector=sector, sigma=sigma, graph=graph)


class SectorDiagrams:
    """Lazily computed transition diagrams of one n-gon surface."""

    def __init__(self, surface: TranslationSurface, samples: int = DEFAULT_SAMPLES):
        self.surface = surface
        self.samples = samples
        self.n = surface.polygons[0].size
        self._cache: Dict[int, TransitionDiagram] = {}

    def __getitem__(self, index: int) -> TransitionDiagram:
        index %= self.n
        if index not in self._cache:
            self._cache[index] = transition_diagram(self.surface, index, self.samples)
        return self._cache[index]

    def for_direction(self, theta: float) -> Optional[TransitionDiagram]:
        index = sector_index(theta, self.n)
        return None if index is None else self[index]

    def table(self) -> Dict[int, Tuple[str, ...]]:
        """σ_i for every sector."""
        return {index: self[index].sigma for index in range(self.n)}
