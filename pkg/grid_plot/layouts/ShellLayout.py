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


def circle_points(n: int) -> np.ndarray:
    angles = 2.0 * math.pi * np.arange(n) / n
    return np.column_stack([np.cos(angles), np.sin(angles)])


class ShellLayout(GraphLayout):
    """All nodes on the unit circle in node index order, starting at angle 0."""

    name = LayoutAlgorithm.SHELL.value

    def two_node_positions(self, config: LayoutConfig) -> np.ndarray:
        return circle_points(2)

    def _solve(
        self, graph: PowerGraph, nodes: List[int], config: LayoutConfig, start: np.ndarray, pinned: np.ndarray
    ) -> Tuple[np.ndarray, LayoutStats]:
        return circle_points(len(nodes)), LayoutStats()


def shell(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    from grid_plot.LayoutKernel import LayoutKernel

    return LayoutKernel().layout_graph(graph, for_algorithm(config, LayoutAlgorithm.SHELL), init, pinned)
