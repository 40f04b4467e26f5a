"""
GraphLayout - common driver for the layout algorithms.

Subclasses implement `_solve` on a connected graph with at least three nodes.
The driver handles the empty, one-node and two-node cases, builds the start
positions (given coordinates first, the seeded unit-disk draw otherwise),
restores pinned coordinates bit-exactly and checks that the result is
finite.
"""

from typing import AbstractSet, List, Optional, Tuple

import numpy as np

from grid_plot.errors import EmptyGraphError, LayoutConfigError, LayoutError
from grid_plot.layouts.LayoutConfig import Coords, LayoutConfig, LayoutResult, LayoutStats
from grid_plot.layouts.random_init import random_disk
from grid_plot.PowerGraph import PowerGraph


class GraphLayout:
    name = ""
    supports_pinning = False

    def natural_length(self, config: LayoutConfig, n: int) -> float:
        return 1.0

    def two_node_positions(self, config: LayoutConfig) -> np.ndarray:
        return np.array([[0.0, 0.0], [self.natural_length(config, 2), 0.0]])

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        raise NotImplementedError

    def initial_positions(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, init: Optional[Coords]
    ) -> np.ndarray:
        start = random_disk(len(nodes), config.seed)
        if init:
            for i, node in enumerate(nodes):
                if node in init:
                    start[i] = init[node]
        return start

    def compute(
        self,
        graph: PowerGraph,
        config: LayoutConfig,
        init: Optional[Coords] = None,
        pinned: Optional[AbstractSet[int]] = None,
    ) -> LayoutResult:
        nodes = graph.nodes()
        n = len(nodes)
        if n == 0:
            raise EmptyGraphError()
        pins = {p for p in (pinned or ()) if p in graph} if self.supports_pinning else set()
        missing = [p for p in pins if not init or p not in init]
        if missing:
            raise LayoutConfigError(f"pinned nodes {sorted(missing)} have no coordinates")
        mask = np.array([node in pins for node in nodes], dtype=bool)

        if n <= 2:
            positions = self._small(nodes, config, init or {}, mask)
            stats = LayoutStats(algorithm=self.name)
        else:
            start = self.initial_positions(graph, nodes, config, init)
            positions, stats = self._solve(graph, nodes, config, start, mask)
            stats.algorithm = self.name

        if mask.any():
            assert init is not None
            positions[mask] = np.array([init[node] for node, m in zip(nodes, mask) if m], dtype=float)
        if not np.all(np.isfinite(positions)):
            raise LayoutError(f"{self.name} layout produced non-finite coordinates")
        coords = {node: (float(positions[i, 0]), float(positions[i, 1])) for i, node in enumerate(nodes)}
        return LayoutResult(coords, stats)

    def _small(self, nodes: List[int], config: LayoutConfig, init: Coords, mask: np.ndarray) -> np.ndarray:
        if len(nodes) == 1:
            return np.array([init[nodes[0]]], dtype=float) if mask[0] else np.zeros((1, 2))
        canonical = self.two_node_positions(config)
        if mask.all():
            return np.array([init[nodes[0]], init[nodes[1]]], dtype=float)
        if mask.any():
            length = float(np.linalg.norm(canonical[1] - canonical[0]))
            anchor = np.array(init[nodes[0] if mask[0] else nodes[1]], dtype=float)
            placed = np.vstack([anchor, anchor + (length, 0.0)])
            return placed if mask[0] else placed[::-1]
        return canonical
