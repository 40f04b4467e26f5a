"""
Scalable force directed placement.

Spring-electrical model: every pair of nodes repels with C*K^2/d and every
edge attracts with d^2/K, so an isolated edge settles at length K*C^(1/3).
Nodes move a fixed step along their normalized net force; the step shrinks
by 0.9 whenever the total force energy fails to drop and grows back after
five consecutive improvements. Runs on the full graph (no coarsening).

When some nodes are pinned, K is scaled by the median length of the edges
between pinned nodes so completed positions share the units of the known
coordinates.
"""

import logging
from typing import AbstractSet, List, Optional, Tuple

import numpy as np
from scipy import sparse

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

logger = logging.getLogger(__name__)

STEP_DECAY = 0.9
PROGRESS_STEPS = 5
CONVERGENCE_TOL = 1e-3
MIN_DISTANCE = 1e-9


class SFDPLayout(GraphLayout):
    name = LayoutAlgorithm.SFDP.value
    supports_pinning = True

    def natural_length(self, config: LayoutConfig, n: int) -> float:
        return config.K * config.C ** (1.0 / 3.0)

    def _pinned_scale(self, graph: PowerGraph, nodes: List[int], start: np.ndarray, pinned: np.ndarray) -> float:
        row = {node: i for i, node in enumerate(nodes)}
        lengths = [
            float(np.linalg.norm(start[row[u]] - start[row[v]]))
            for u, v in graph.edges()
            if pinned[row[u]] and pinned[row[v]]
        ]
        lengths = [length for length in lengths if length > 0]
        return float(np.median(lengths)) if lengths else 1.0

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        K = config.K * (self._pinned_scale(graph, nodes, start, pinned) if pinned.any() else 1.0)
        C = config.C
        tails, heads = sparse.triu(graph.adjacency_matrix(nodes), k=1).nonzero()
        x = start.copy()

        step = K
        energy = np.inf
        progress = 0
        iterations = 0
        for iterations in range(1, config.iterations + 1):
            previous_x = x.copy()
            previous_energy = energy

            # pairwise repulsion from squared gaps, no (n, n, 2) offsets; coincident pairs exert none
            squared = np.einsum("ij,ij->i", x, x)
            gap = squared[:, np.newaxis] + squared[np.newaxis, :] - 2.0 * x @ x.T
            floor = MIN_DISTANCE ** 2
            repulsion = np.where(gap > floor, C * K * K / np.maximum(gap, floor), 0.0)
            np.fill_diagonal(repulsion, 0.0)
            force = repulsion.sum(axis=1)[:, np.newaxis] * x - repulsion @ x

            span = x[tails] - x[heads]
            length = np.maximum(np.linalg.norm(span, axis=-1), MIN_DISTANCE)
            pull = span * (length / K)[:, np.newaxis]
            np.add.at(force, tails, -pull)
            np.add.at(force, heads, pull)
            force[pinned] = 0.0

            magnitude = np.linalg.norm(force, axis=-1)
            moving = magnitude > 0
            x[moving] += step * force[moving] / magnitude[moving, np.newaxis]
            energy = float(np.sum(magnitude ** 2))

            if energy < previous_energy:
                progress += 1
                if progress >= PROGRESS_STEPS:
                    progress = 0
                    step /= STEP_DECAY
            else:
                progress = 0
                step *= STEP_DECAY

            if np.linalg.norm(x - previous_x) < CONVERGENCE_TOL * K:
                break

        logger.debug("sfdp: %d nodes, %d iterations, final step %.3g", len(nodes), iterations, step)
        return x, LayoutStats(iterations_run=iterations)


def sfdp(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.SFDP), init, pinned)
