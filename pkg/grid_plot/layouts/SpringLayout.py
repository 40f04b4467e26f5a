"""
Spring layout (Fruchterman-Reingold).

Every pair of nodes repels with force k^2/d and every edge attracts with
d^2/k. Displacements are capped by a temperature that cools linearly to
zero over the configured iterations.
"""

import math
from typing import AbstractSet, List, Optional, Tuple

import numpy as np

from grid_plot.layouts.GraphLayout import GraphLayout
from grid_plot.layouts.LayoutConfig import (
    Coords,
    LayoutAlgorithm,
    LayoutConfig,
    LayoutResult,
    LayoutStats,
    for_algorithm,
)
from grid_plot.PowerGraph import PowerGraph

MIN_DISTANCE = 0.01


class SpringLayout(GraphLayout):
    name = LayoutAlgorithm.SPRING.value
    supports_pinning = True

    def natural_length(self, config: LayoutConfig, n: int) -> float:
        return config.spring_k if config.spring_k is not None else math.sqrt(1.0 / n)

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        k = self.natural_length(config, len(nodes))
        adjacency = graph.adjacency_matrix(nodes).toarray()
        x = start.copy()

        extent = float(np.max(np.ptp(x, axis=0)))
        t = 0.1 * max(extent, k)
        cooling = t / (config.iterations + 1)

        for _ in range(config.iterations):
            delta = x[:, np.newaxis, :] - x[np.newaxis, :, :]
            distance = np.maximum(np.linalg.norm(delta, axis=-1), MIN_DISTANCE)
            factor = k * k / distance ** 2 - adjacency * distance / k
            np.fill_diagonal(factor, 0.0)
            displacement = np.einsum("ijk,ij->ik", delta, factor)

            length = np.linalg.norm(displacement, axis=-1)
            scale = np.where(length > 0, np.minimum(length, t) / np.where(length > 0, length, 1.0), 0.0)
            step = displacement * scale[:, np.newaxis]
            step[pinned] = 0.0
            x += step
            t -= cooling

        return x, LayoutStats(iterations_run=config.iterations)


def spring(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.SPRING), init, pinned)
