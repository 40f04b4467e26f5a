"""
PowerGraph - Visualization graph of a network

Builds an undirected networkx graph in which buses, and optionally devices
attached to buses (generators, loads, shunts, ...), are nodes. Three maps tie
graph indices back to the case data:

- node_comp_map: node index -> ComponentRef
- edge_comp_map: (u, v) -> ComponentRefs of the real grid edges between u and v
- edge_connector_map: (u, v) -> ComponentRef of the attached device

Edge keys are always (min(u, v), max(u, v)). Parallel branches share one
adjacency but all of them are listed in edge_comp_map.

Example:
    ```python
    from grid_plot.PowerGraph import GraphConfig, build_graph

    g = build_graph(net, GraphConfig(node_components=["bus"], connected_components=[],
                                     edge_components=["branch"]))
    degree, ref = g.max_degree()
    ```
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from grid_plot.errors import (
    EmptyGraphError,
    GraphConfigError,
    GraphError,
    MissingEndpointError,
    UnknownNodeError,
)
from grid_plot.Network import (
    ComponentRef,
    Network,
    bus_field,
    bus_key,
    endpoint_fields,
    is_active,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

DEFAULT_NODE_COMPONENTS = ("bus",)
DEFAULT_CONNECTED_COMPONENTS = ("gen", "load", "shunt", "storage")
DEFAULT_EDGE_COMPONENTS = ("branch", "dcline", "switch", "transformer")


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class GraphConfig:
    """Which component types become nodes, attached nodes and edges."""

    node_components: Sequence[str] = DEFAULT_NODE_COMPONENTS
    connected_components: Sequence[str] = DEFAULT_CONNECTED_COMPONENTS
    edge_components: Sequence[str] = DEFAULT_EDGE_COMPONENTS
    exclude_inactive: bool = False

    def __post_init__(self) -> None:
        for name in ("node_components", "connected_components", "edge_components"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        seen: Dict[str, str] = {}
        for name in ("node_components", "connected_components", "edge_components"):
            for ctype in getattr(self, name):
                if ctype in seen:
                    raise GraphConfigError(f"'{ctype}' is listed in both {seen[ctype]} and {name}")
                seen[ctype] = name
        if (self.connected_components or self.edge_components) and "bus" not in self.node_components:
            raise GraphConfigError("'bus' must be a node component when edges or connected components are used")

    @classmethod
    def bus_only(cls, edge_components: Sequence[str] = ("branch",)) -> "GraphConfig":
        return cls(node_components=("bus",), connected_components=(), edge_components=edge_components)


class PowerGraph:
    """
    Undirected simple graph over node indices 1..N plus the component maps.

    Attributes:
        graph: networkx.Graph holding the adjacency
        node_comp_map: node index -> ComponentRef
        edge_comp_map: edge key -> tuple of ComponentRef (grid edges)
        edge_connector_map: edge key -> ComponentRef (connector edges)
    """

    def __init__(
        self,
        graph: nx.Graph,
        node_comp_map: Dict[int, ComponentRef],
        edge_comp_map: Dict[Edge, Tuple[ComponentRef, ...]],
        edge_connector_map: Dict[Edge, ComponentRef],
    ):
        self.graph = graph
        self.node_comp_map = node_comp_map
        self.edge_comp_map = edge_comp_map
        self.edge_connector_map = edge_connector_map
        self._node_of = {ref: node for node, ref in node_comp_map.items()}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], node_type: str = "bus") -> "PowerGraph":
        """A bare graph over nodes 1..n, each edge mapped to its own "branch"."""
        graph = nx.Graph()
        graph.add_nodes_from(range(1, n + 1))
        node_map = {i: ComponentRef(node_type, str(i)) for i in range(1, n + 1)}
        edge_map: Dict[Edge, Tuple[ComponentRef, ...]] = {}
        for k, (u, v) in enumerate(edges, start=1):
            key = edge_key(u, v)
            graph.add_edge(*key)
            edge_map[key] = edge_map.get(key, ()) + (ComponentRef("branch", str(k)),)
        return cls(graph, node_map, edge_map, {})

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def __contains__(self, node: object) -> bool:
        return node in self.node_comp_map

    @property
    def number_of_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def number_of_edges(self) -> int:
        return self.graph.number_of_edges()

    def nodes(self) -> List[int]:
        return sorted(self.node_comp_map)

    def edges(self) -> List[Edge]:
        return sorted(edge_key(u, v) for u, v in self.graph.edges())

    def node_of(self, ref: Tuple[str, str]) -> int:
        try:
            return self._node_of[ComponentRef(*ref)]
        except KeyError:
            raise GraphError(f"{ref} is not a node of the graph") from None

    def nodes_of(self, component_type: str) -> List[int]:
        return [n for n in self.nodes() if self.node_comp_map[n].component_type == component_type]

    def is_connected(self) -> bool:
        return self.number_of_nodes > 0 and nx.is_connected(self.graph)

    def connected_node_sets(self) -> List[List[int]]:
        """Node lists of each connected piece, ordered by smallest node index."""
        pieces = [sorted(c) for c in nx.connected_components(self.graph)]
        return sorted(pieces, key=lambda nodes: nodes[0])

    def subgraph(self, nodes: Iterable[int]) -> "PowerGraph":
        keep = set(nodes)
        return PowerGraph(
            self.graph.subgraph(keep).copy(),
            {n: r for n, r in self.node_comp_map.items() if n in keep},
            {k: r for k, r in self.edge_comp_map.items() if k[0] in keep and k[1] in keep},
            {k: r for k, r in self.edge_connector_map.items() if k[0] in keep and k[1] in keep},
        )

    def adjacency_matrix(self, nodes: Optional[Sequence[int]] = None) -> sparse.csr_array:
        """0/1 adjacency in the given node order (ascending index by default)."""
        order = list(nodes) if nodes is not None else self.nodes()
        return nx.to_scipy_sparse_array(self.graph, nodelist=order, dtype=float, format="csr")

    def degree(self, node: int) -> int:
        if node not in self.node_comp_map:
            raise UnknownNodeError(node)
        return int(self.graph.degree[node])

    def max_degree(self) -> Tuple[int, ComponentRef]:
        """Highest degree and its component; ties go to the smallest node index."""
        if self.number_of_nodes == 0:
            raise EmptyGraphError()
        best = max(self.nodes(), key=lambda n: (self.graph.degree[n], -n))
        return int(self.graph.degree[best]), self.node_comp_map[best]

    def incidence_matrix(self) -> sparse.csc_matrix:
        """
        Node x edge incidence matrix.

        Rows follow ascending node index, columns follow `edges()`. Each column
        holds +1 at its lower endpoint and -1 at the other.
        """
        nodes = self.nodes()
        row_of = {n: i for i, n in enumerate(nodes)}
        edges = self.edges()
        rows = np.empty(2 * len(edges), dtype=np.int64)
        cols = np.repeat(np.arange(len(edges), dtype=np.int64), 2)
        data = np.tile(np.array([1.0, -1.0]), len(edges))
        for j, (u, v) in enumerate(edges):
            rows[2 * j] = row_of[u]
            rows[2 * j + 1] = row_of[v]
        return sparse.csc_matrix((data, (rows, cols)), shape=(len(nodes), len(edges)))

    def shortest_paths(self, source: int) -> Dict[int, float]:
        """Unweighted hop distance from source; unreachable nodes map to math.inf."""
        if source not in self.node_comp_map:
            raise UnknownNodeError(source)
        reached = nx.single_source_shortest_path_length(self.graph, source)
        return {n: reached.get(n, math.inf) for n in self.nodes()}

    def degree_histogram(self) -> Dict[int, int]:
        counts = Counter(int(d) for _, d in self.graph.degree())
        return dict(sorted(counts.items()))


def _node_types(net: Network, cfg: GraphConfig) -> List[str]:
    others = [t for t in list(cfg.node_components) + list(cfg.connected_components) if t != "bus"]
    ordered = (["bus"] if "bus" in cfg.node_components else []) + sorted(others)
    return [t for t in ordered if net.count(t) > 0]


def build_graph(net: Network, cfg: Optional[GraphConfig] = None) -> PowerGraph:
    """
    Build the visualization graph of a network.

    Args:
        net: A validated network
        cfg: Component selection (defaults to GraphConfig())

    Returns:
        PowerGraph with one node per included component instance, one edge
        per pair of connected buses and one connector per attached device

    Raises:
        MissingEndpointError: An included component references a bus that is
            not in the graph (for example one excluded as inactive)
    """
    cfg = cfg or GraphConfig()
    graph = nx.Graph()
    node_map: Dict[int, ComponentRef] = {}
    edge_map: Dict[Edge, Tuple[ComponentRef, ...]] = {}
    connector_map: Dict[Edge, ComponentRef] = {}
    bus_nodes: Dict[str, int] = {}

    def included(ctype: str, record: dict) -> bool:
        return not cfg.exclude_inactive or is_active(ctype, record)

    next_index = 1
    for ctype in _node_types(net, cfg):
        records = net.records(ctype)
        for cid in net.sorted_ids(ctype):
            if not included(ctype, records[cid]):
                continue
            ref = ComponentRef(ctype, cid)
            node_map[next_index] = ref
            graph.add_node(next_index)
            if ctype == "bus":
                bus_nodes[cid] = next_index
            next_index += 1

    connected = set(cfg.connected_components)
    for node in sorted(node_map):
        ref = node_map[node]
        if ref.component_type not in connected:
            continue
        record = net.records(ref.component_type)[ref.id]
        attach = bus_field(ref.component_type, record)
        if attach is None:
            raise GraphError(f"{ref} has no bus reference field")
        bus = bus_key(record[attach])
        if bus not in bus_nodes:
            raise MissingEndpointError(ref.component_type, ref.id, str(record[attach]))
        key = edge_key(bus_nodes[bus], node)
        graph.add_edge(*key)
        connector_map[key] = ref

    for ctype in cfg.edge_components:
        records = net.records(ctype)
        for cid in net.sorted_ids(ctype):
            record = records[cid]
            if not included(ctype, record):
                continue
            ends = endpoint_fields(record)
            if ends is None:
                raise GraphError(f"{ctype} {cid} has neither f_bus/t_bus nor source/target")
            nodes = []
            for f in ends:
                bus = bus_key(record[f])
                if bus not in bus_nodes:
                    raise MissingEndpointError(ctype, cid, str(record[f]))
                nodes.append(bus_nodes[bus])
            if nodes[0] == nodes[1]:
                logger.warning("%s %s connects bus %s to itself; skipped", ctype, cid, record[ends[0]])
                continue
            key = edge_key(*nodes)
            graph.add_edge(*key)
            edge_map[key] = edge_map.get(key, ()) + (ComponentRef(ctype, cid),)

    logger.debug(
        "built graph: %d nodes, %d grid edges, %d connectors",
        graph.number_of_nodes(), len(edge_map), len(connector_map),
    )
    return PowerGraph(graph, node_map, edge_map, connector_map)


def degree(g: PowerGraph, node: int) -> int:
    return g.degree(node)


def max_degree(g: PowerGraph) -> Tuple[int, ComponentRef]:
    return g.max_degree()


def incidence_matrix(g: PowerGraph) -> sparse.csc_matrix:
    return g.incidence_matrix()


def shortest_paths(g: PowerGraph, source: int) -> Dict[int, float]:
    return g.shortest_paths(source)


def degree_histogram(g: PowerGraph) -> Dict[int, int]:
    return g.degree_histogram()
