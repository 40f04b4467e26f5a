"""
LayoutKernel - Layout registry and orchestration

The LayoutKernel owns the available layout algorithms and runs them on
networks. It takes care of everything around a single algorithm run:

- Splitting a disconnected graph into connected pieces, laying out each one
  with its own seed (seed + piece ordinal) and packing them left to right
- Pinned coordinates for fixed layouts
- Timing the run and collecting statistics
- Persisting coordinates into the network as "xcoord_1"/"ycoord_1"

Algorithms are registered by name, so a custom IGraphLayout can replace or
extend the six built-in ones.

Example:
    ```python
    from grid_plot.LayoutKernel import LayoutKernel
    from grid_plot.layouts import LayoutConfig

    kernel = LayoutKernel()
    net, stats = kernel.layout_network(net, LayoutConfig(algorithm="sfdp", C=0.1, K=0.9))
    print(f"Time to compute layout [sec]: {stats.elapsed_seconds:.3f}")
    ```
"""

import logging
import math
import time
from typing import AbstractSet, Dict, List, Optional, Set, Tuple, Union

import numpy as np

from grid_plot.errors import EmptyGraphError, LayoutConfigError, UnknownLayoutError
from grid_plot.IGraphLayout import IGraphLayout
from grid_plot.layouts import (
    GridLayout,
    KamadaKawaiLayout,
    SFDPLayout,
    ShellLayout,
    SpectralLayout,
    SpringLayout,
)
from grid_plot.layouts.LayoutConfig import (
    Coords,
    LayoutAlgorithm,
    LayoutConfig,
    LayoutResult,
    LayoutStats,
)
from grid_plot.Network import COORD_FIELDS, Case, MultiNetwork, Network, union_network
from grid_plot.PowerGraph import GraphConfig, PowerGraph, build_graph

try:
    from grid_plot.config import GRIDPLOT_LOGGING_ENABLED
except ImportError:
    GRIDPLOT_LOGGING_ENABLED = True

logger = logging.getLogger(__name__)

PACKING_PADDING = 0.1


def _bbox(points: np.ndarray) -> Tuple[float, float, float, float]:
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def _box_size(box: Tuple[float, float, float, float]) -> float:
    return max(box[2] - box[0], box[3] - box[1])


def pack_pieces(pieces: List[Tuple[List[int], np.ndarray, bool]]) -> Coords:
    """
    Place laid-out pieces side by side.

    Each piece is (nodes, positions, anchored). Anchored pieces (those with
    pinned nodes) keep their absolute positions. Free pieces are centred on
    y = 0 and placed left to right after the anchored ones, separated by 10%
    of the larger of the two neighbouring bounding boxes (1.0 between two
    single points). A lone piece is returned untouched.
    """
    if len(pieces) == 1:
        nodes, positions, _ = pieces[0]
        return {n: (float(p[0]), float(p[1])) for n, p in zip(nodes, positions)}

    coords: Coords = {}
    previous: Optional[Tuple[float, float, float, float]] = None
    anchored = [(nodes, pos) for nodes, pos, fixed in pieces if fixed]
    if anchored:
        for nodes, pos in anchored:
            coords.update({n: (float(p[0]), float(p[1])) for n, p in zip(nodes, pos)})
        previous = _bbox(np.vstack([pos for _, pos in anchored]))

    for nodes, positions, fixed in pieces:
        if fixed:
            continue
        placed = positions.copy()
        box = _bbox(placed)
        if previous is None:
            left = 0.0
        else:
            size = max(_box_size(box), _box_size(previous))
            left = previous[2] + (PACKING_PADDING * size if size > 0 else 1.0)
        placed -= np.array([box[0] - left, (box[1] + box[3]) / 2.0])
        previous = _bbox(placed)
        coords.update({n: (float(p[0]), float(p[1])) for n, p in zip(nodes, placed)})
    return coords


def record_coords(record: dict) -> Optional[Tuple[float, float]]:
    values = [record.get(f) for f in COORD_FIELDS]
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in values):
        return float(values[0]), float(values[1])  # type: ignore[arg-type]
    return None


class LayoutKernel:
    """
    Registry and runner of layout algorithms.

    Attributes:
        _layouts: Dictionary mapping algorithm names to IGraphLayout instances
    """

    def __init__(self, layouts: Optional[List[IGraphLayout]] = None, logging_enabled: bool = GRIDPLOT_LOGGING_ENABLED):
        self._layouts: Dict[str, IGraphLayout] = {}
        self._logging_enabled = logging_enabled
        defaults: List[IGraphLayout] = [
            KamadaKawaiLayout(),
            SpringLayout(),
            SFDPLayout(),
            SpectralLayout(),
            ShellLayout(),
            GridLayout(),
        ]
        for layout in defaults + list(layouts or []):
            self.register_layout(layout)

    @property
    def logging_enabled(self) -> bool:
        return self._logging_enabled

    @property
    def layouts(self) -> List[str]:
        return sorted(self._layouts)

    def register_layout(self, layout: IGraphLayout) -> None:
        """Register an algorithm; a layout with the same name is replaced."""
        if not isinstance(layout, IGraphLayout):
            raise ValueError("Layout must implement IGraphLayout")
        self._layouts[layout.name] = layout

    def get_layout(self, name: Union[str, LayoutAlgorithm]) -> IGraphLayout:
        key = name.value if isinstance(name, LayoutAlgorithm) else str(name)
        if key not in self._layouts:
            try:
                key = LayoutAlgorithm.parse(key).value
            except UnknownLayoutError:
                raise UnknownLayoutError(str(name)) from None
        if key not in self._layouts:
            raise UnknownLayoutError(str(name))
        return self._layouts[key]

    def layout_graph(
        self,
        graph: PowerGraph,
        config: Optional[LayoutConfig] = None,
        init: Optional[Coords] = None,
        pinned: Optional[AbstractSet[int]] = None,
    ) -> LayoutResult:
        """
        Lay out every node of a graph.

        Args:
            graph: Graph to lay out
            config: Algorithm and parameters (default LayoutConfig())
            init: Known coordinates; used as start positions and for pins
            pinned: Nodes whose coordinates in `init` must not change

        Returns:
            LayoutResult with coordinates for all nodes and run statistics

        Raises:
            EmptyGraphError: The graph has no nodes
            LayoutConfigError: Pins requested from an algorithm without pinning
        """
        config = config or LayoutConfig()
        if graph.number_of_nodes == 0:
            raise EmptyGraphError()
        algorithm = self.get_layout(config.algorithm)
        pins: Set[int] = {p for p in (pinned or ()) if p in graph}
        if pins and not algorithm.supports_pinning:
            raise LayoutConfigError(f"{algorithm.name} layout does not support pinned nodes")

        started = time.perf_counter()
        pieces = graph.connected_node_sets()
        packed: List[Tuple[List[int], np.ndarray, bool]] = []
        runs: List[Tuple[int, LayoutStats]] = []
        for ordinal, nodes in enumerate(pieces):
            piece_pins = pins.intersection(nodes)
            if piece_pins and len(piece_pins) == len(nodes):
                assert init is not None
                positions = np.array([init[n] for n in nodes], dtype=float)
            else:
                sub = graph if len(pieces) == 1 else graph.subgraph(nodes)
                result = algorithm.compute(sub, config.replace(seed=config.seed + ordinal), init, piece_pins)
                positions = result.positions(nodes)
                runs.append((len(nodes), result.stats))
            packed.append((nodes, positions, bool(piece_pins)))

        coords = pack_pieces(packed)
        stats = LayoutStats(algorithm=algorithm.name, pieces=len(pieces))
        if runs:
            stats.iterations_run = max(s.iterations_run for _, s in runs)
            stresses = [s.final_stress for _, s in runs if s.final_stress is not None]
            stats.final_stress = float(sum(stresses)) if stresses else None
            stats.stress_history = max(runs, key=lambda run: run[0])[1].stress_history
        stats.elapsed_seconds = time.perf_counter() - started

        if self._logging_enabled:
            logger.info(
                "%s layout: %d nodes in %d pieces, %.3f s",
                algorithm.name, graph.number_of_nodes, len(pieces), stats.elapsed_seconds,
            )
        return LayoutResult(coords, stats)

    def layout_network(
        self,
        case: Case,
        config: Optional[LayoutConfig] = None,
        graph_config: Optional[GraphConfig] = None,
    ) -> Tuple[Case, LayoutStats]:
        """
        Compute coordinates and write them into a copy of the case.

        With config.fixed, records already carrying both "xcoord_1" and
        "ycoord_1" are pinned. If every node is pinned nothing is computed;
        if only some are, SFDP completes the rest. Multi-network cases are
        laid out once over the union of their networks.

        Returns:
            (updated case, layout statistics)
        """
        config = config or LayoutConfig()
        if isinstance(case, MultiNetwork):
            laid, stats = self.layout_network(union_network(case), config, graph_config)
            assert isinstance(laid, Network)
            updates = {
                ref: {f: record[f] for f in COORD_FIELDS}
                for ref, record in laid.iter_records()
                if all(f in record for f in COORD_FIELDS)
            }
            return case.with_records(updates), stats

        graph = build_graph(case, graph_config)
        if graph.number_of_nodes == 0:
            raise EmptyGraphError("network has no components to lay out")

        init: Coords = {}
        for node, ref in graph.node_comp_map.items():
            point = record_coords(case.components[ref.component_type][ref.id])
            if point is not None:
                init[node] = point

        pinned: Set[int] = set(init) if config.fixed else set()
        if pinned and len(pinned) == graph.number_of_nodes:
            if self._logging_enabled:
                logger.info("all %d nodes have coordinates; layout skipped", len(pinned))
            return case.with_records({}), LayoutStats(algorithm="fixed")
        run_config = config.with_algorithm(LayoutAlgorithm.SFDP) if pinned else config

        result = self.layout_graph(graph, run_config, init if pinned else None, pinned)
        updates = {
            graph.node_comp_map[node]: {"xcoord_1": x, "ycoord_1": y}
            for node, (x, y) in result.coords.items()
            if node not in pinned
        }
        return case.with_records(updates), result.stats


def layout_graph(
    graph: PowerGraph,
    config: Optional[LayoutConfig] = None,
    init: Optional[Coords] = None,
    pinned: Optional[AbstractSet[int]] = None,
) -> LayoutResult:
    return LayoutKernel().layout_graph(graph, config, init, pinned)


def layout_network(
    case: Case,
    config: Optional[LayoutConfig] = None,
    graph_config: Optional[GraphConfig] = None,
) -> Case:
    """Return a copy of the case with "xcoord_1"/"ycoord_1" on every graph node component."""
    laid, _ = LayoutKernel().layout_network(case, config, graph_config)
    return laid
