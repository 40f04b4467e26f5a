"""
Spectral layout: x and y are the Laplacian eigenvectors of the second and
third smallest eigenvalues. Each axis is sign-normalized so its largest
magnitude entry (first one on ties) is positive.
"""

import math
from typing import AbstractSet, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh
from scipy.sparse import csgraph

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

TIE_TOL = 1e-9


def laplacian(graph: PowerGraph, nodes: List[int]) -> np.ndarray:
    return csgraph.laplacian(graph.adjacency_matrix(nodes)).toarray()


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    fixed = vectors.copy()
    for col in range(fixed.shape[1]):
        magnitude = np.abs(fixed[:, col])
        pivot = int(np.flatnonzero(magnitude >= magnitude.max() - TIE_TOL)[0])
        if fixed[pivot, col] < 0:
            fixed[:, col] = -fixed[:, col]
    return fixed


class SpectralLayout(GraphLayout):
    name = LayoutAlgorithm.SPECTRAL.value

    def two_node_positions(self, config: LayoutConfig) -> np.ndarray:
        half = 1.0 / math.sqrt(2.0)
        return np.array([[half, 0.0], [-half, 0.0]])

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        _, vectors = eigh(laplacian(graph, nodes), subset_by_index=[1, 2])
        return fix_signs(vectors), LayoutStats(iterations_run=1)


def spectral(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.SPECTRAL), init, pinned)
