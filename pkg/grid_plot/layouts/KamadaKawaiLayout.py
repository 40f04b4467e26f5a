"""
Kamada-Kawai layout by stress majorization.

Minimizes the stress

    E(X) = sum_{i<j} w_ij (|x_i - x_j| - d_ij)^2,   w_ij = 1 / d_ij^2

where d_ij is the hop distance between nodes i and j. Each sweep solves the
quadratic majorizer of E at the current positions exactly (a Cholesky solve
with a fixed factor), so E never increases from one sweep to the next.
Pinned nodes are held in place by solving only for the free rows.

Without given coordinates the sweeps start from the classical scaling of the
hop distances (top two eigenvectors of the double-centred squared distance
matrix) nudged by a tiny multiple of the seeded unit-disk draw, so nodes that
are symmetric in the graph do not start on top of each other.
"""

import logging
from typing import AbstractSet, List, Optional, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh
from scipy.sparse import csgraph
from scipy.spatial.distance import pdist, squareform

from grid_plot.errors import LayoutError
from grid_plot.layouts.GraphLayout import GraphLayout
from grid_plot.layouts.LayoutConfig import (
    Coords,
    LayoutAlgorithm,
    LayoutConfig,
    LayoutResult,
    LayoutStats,
    for_algorithm,
)
from grid_plot.layouts.SpectralLayout import fix_signs
from grid_plot.PowerGraph import PowerGraph

logger = logging.getLogger(__name__)

STRESS_FLOOR = 1e-15
START_JITTER = 1e-6


def hop_distances(graph: PowerGraph, nodes: List[int]) -> np.ndarray:
    adjacency = graph.adjacency_matrix(nodes)
    distances = csgraph.shortest_path(adjacency, method="D", directed=False, unweighted=True)
    if not np.all(np.isfinite(distances)):
        raise LayoutError("hop distances are infinite; lay out connected pieces separately")
    return distances


def pairwise(positions: np.ndarray) -> np.ndarray:
    return squareform(pdist(positions))


def embedded_stress(embedded: np.ndarray, distances: np.ndarray, weights: np.ndarray) -> float:
    return 0.5 * float(np.sum(weights * (embedded - distances) ** 2))


def stress(positions: np.ndarray, distances: np.ndarray, weights: np.ndarray) -> float:
    return embedded_stress(pairwise(positions), distances, weights)


def classical_scaling(distances: np.ndarray) -> np.ndarray:
    """(n, 2) points whose pairwise distances best match `distances` in the Gram sense."""
    n = distances.shape[0]
    squared = distances ** 2
    rows = squared.mean(axis=1)
    gram = -0.5 * (squared - rows[:, np.newaxis] - rows[np.newaxis, :] + rows.mean())
    values, vectors = eigh(gram, subset_by_index=[n - 2, n - 1])
    return fix_signs(vectors[:, ::-1]) * np.sqrt(np.clip(values[::-1], 0.0, None))


class KamadaKawaiLayout(GraphLayout):
    name = LayoutAlgorithm.KAMADA_KAWAI.value
    supports_pinning = True

    def initial_positions(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, init: Optional[Coords]
    ) -> np.ndarray:
        start = super().initial_positions(graph, nodes, config, init)
        if init and any(node in init for node in nodes):
            return start
        return classical_scaling(hop_distances(graph, nodes)) + START_JITTER * start

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        n = len(nodes)
        d = hop_distances(graph, nodes)
        with np.errstate(divide="ignore"):
            w = np.where(d > 0, 1.0 / d ** 2, 0.0)
        lw = -w
        np.fill_diagonal(lw, w.sum(axis=1))

        free = ~pinned
        if pinned.any():
            factor = cho_factor(lw[np.ix_(free, free)])
            coupling = lw[np.ix_(free, pinned)] @ start[pinned]
        else:
            factor = cho_factor(lw + np.ones((n, n)) / n)
            coupling = None

        wd = w * d
        x = start.copy()
        embedded = pairwise(x)
        history = [embedded_stress(embedded, d, w)]
        sweeps = 0
        while sweeps < config.max_sweeps and history[-1] > STRESS_FLOOR:
            with np.errstate(divide="ignore", invalid="ignore"):
                b = np.where(embedded > 0, -wd / embedded, 0.0)
            np.fill_diagonal(b, 0.0)
            np.fill_diagonal(b, -b.sum(axis=1))
            bx = b @ x
            if coupling is None:
                x = cho_solve(factor, bx)
            else:
                x = x.copy()
                x[free] = cho_solve(factor, bx[free] - coupling)
            sweeps += 1
            embedded = pairwise(x)
            history.append(embedded_stress(embedded, d, w))
            previous, current = history[-2], history[-1]
            if previous - current <= config.tol * max(previous, STRESS_FLOOR):
                break

        logger.debug("kamada-kawai: %d nodes, %d sweeps, stress %.6g", n, sweeps, history[-1])
        return x, LayoutStats(iterations_run=sweeps, final_stress=history[-1], stress_history=history)


def kamada_kawai(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.KAMADA_KAWAI), init, pinned)
