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


def lattice_points(n: int) -> np.ndarray:
    """Row-major lattice ceil(sqrt(n)) wide; rows go downward."""
    width = math.ceil(math.sqrt(n))
    index = np.arange(n)
    return np.column_stack([index % width, -(index // width)]).astype(float)


class GridLayout(GraphLayout):
    name = LayoutAlgorithm.GRID.value

    def two_node_positions(self, config: LayoutConfig) -> np.ndarray:
        return lattice_points(2)

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        return lattice_points(len(nodes)), LayoutStats()


def grid(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.GRID), init, pinned)
