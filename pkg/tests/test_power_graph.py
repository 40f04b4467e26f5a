"""
Tests for PowerGraph construction and graph analytics.
"""

import math

import numpy as np
import pytest

from grid_plot.errors import EmptyGraphError, GraphConfigError, MissingEndpointError, UnknownNodeError
from grid_plot.Network import ComponentRef, Network
from grid_plot.PowerGraph import (
    GraphConfig,
    PowerGraph,
    build_graph,
    degree,
    degree_histogram,
    incidence_matrix,
    max_degree,
    shortest_paths,
)


class TestGraphConfig:
    """Test cases for GraphConfig validation."""

    @pytest.mark.unit
    def test_defaults(self):
        """Defaults match the usual bus/device/branch split."""
        cfg = GraphConfig()
        assert cfg.node_components == ("bus",)
        assert cfg.connected_components == ("gen", "load", "shunt", "storage")
        assert cfg.edge_components == ("branch", "dcline", "switch", "transformer")
        assert cfg.exclude_inactive is False

    @pytest.mark.unit
    def test_lists_disjoint(self):
        """A type may appear in only one list."""
        with pytest.raises(GraphConfigError):
            GraphConfig(connected_components=["gen"], edge_components=["gen"])

    @pytest.mark.unit
    def test_bus_required(self):
        """Edges and connected components need bus nodes."""
        with pytest.raises(GraphConfigError):
            GraphConfig(node_components=["gen"], connected_components=[], edge_components=["branch"])

    @pytest.mark.unit
    def test_lists_become_tuples(self):
        """Lists are frozen into tuples so configs hash and compare."""
        assert GraphConfig(connected_components=["gen"]) == GraphConfig(connected_components=("gen",))


class TestBuildGraph:
    """Test cases for build_graph."""

    @pytest.mark.unit
    def test_single_gen(self, network_factory):
        """One bus and one gen give two nodes joined by a connector."""
        g = build_graph(network_factory(1, gens=[1]))
        assert g.number_of_nodes == 2
        assert g.number_of_edges == 1
        assert g.edge_comp_map == {}
        assert g.edge_connector_map == {(1, 2): ComponentRef("gen", "1")}

    @pytest.mark.unit
    def test_numpy_bus_references(self):
        """Endpoints stored as numpy integers resolve to their buses."""
        net = Network({"name": "np"}, {
            "bus": {str(i): {"index": i, "bus_i": i} for i in (1, 2, 3)},
            "branch": {
                "1": {"index": 1, "f_bus": np.int64(1), "t_bus": np.int64(2), "br_status": 1},
                "2": {"index": 2, "f_bus": np.int32(2), "t_bus": np.int64(3), "br_status": 1},
            },
            "gen": {"1": {"index": 1, "gen_bus": np.int64(3), "gen_status": 1}},
        })
        g = build_graph(net)
        assert g.number_of_nodes == 4
        assert len(g.edge_comp_map) == 2
        assert list(g.edge_connector_map.values()) == [ComponentRef("gen", "1")]
        assert g.is_connected()

    @pytest.mark.unit
    def test_case39_defaults(self, case39):
        """39 buses, 10 gens and 21 loads; 46 branches and 31 connectors."""
        g = build_graph(case39)
        assert g.number_of_nodes == 70
        assert g.number_of_edges == 77
        assert len(g.edge_comp_map) == 46
        assert len(g.edge_connector_map) == 31
        assert g.is_connected()

    @pytest.mark.unit
    def test_node_order(self, case39):
        """Buses come first by id, then other types by name and id."""
        g = build_graph(case39)
        assert g.node_comp_map[1] == ComponentRef("bus", "1")
        assert g.node_comp_map[39] == ComponentRef("bus", "39")
        assert g.node_comp_map[40] == ComponentRef("gen", "1")
        assert g.node_comp_map[50] == ComponentRef("load", "1")
        assert g.nodes_of("gen") == list(range(40, 50))
        assert g.node_of(("load", "21")) == 70

    @pytest.mark.unit
    def test_parallel_branches(self, case5):
        """Parallel branches share one adjacency but are all recorded."""
        g = build_graph(case5)
        key = (g.node_of(("bus", "1")), g.node_of(("bus", "4")))
        assert g.edge_comp_map[key] == (ComponentRef("branch", "2"), ComponentRef("branch", "3"))
        assert g.number_of_nodes == 13
        assert g.number_of_edges == len(g.edge_comp_map) + len(g.edge_connector_map) == 14

    @pytest.mark.unit
    def test_exclude_inactive(self, case5):
        """Inactive buses, gens and branches are dropped on request."""
        g = build_graph(case5, GraphConfig(exclude_inactive=True))
        assert g.number_of_nodes == 11
        assert ("bus", "5") not in g._node_of
        assert ("gen", "4") not in g._node_of
        assert all(ComponentRef("branch", "6") not in refs for refs in g.edge_comp_map.values())

    @pytest.mark.unit
    def test_missing_endpoint(self, case5):
        """A gen whose bus is excluded cannot be attached."""
        net = case5.with_records({("gen", "1"): {"gen_bus": 5}})
        with pytest.raises(MissingEndpointError):
            build_graph(net, GraphConfig(exclude_inactive=True))

    @pytest.mark.unit
    def test_only_configured_types(self, case5):
        """Types missing from the config are not in the graph."""
        g = build_graph(case5, GraphConfig.bus_only())
        assert {r.component_type for r in g.node_comp_map.values()} == {"bus"}
        assert g.edge_connector_map == {}
        assert all(r.component_type == "branch" for refs in g.edge_comp_map.values() for r in refs)

    @pytest.mark.unit
    def test_custom_types(self):
        """Custom connected and edge types use their bus fields."""
        net = Network({}, {
            "bus": {"1": {"index": 1}, "2": {"index": 2}},
            "hydro": {"1": {"index": 1, "hydro_bus": 2}},
            "link": {"1": {"index": 1, "source": 1, "target": 2}},
        })
        g = build_graph(net, GraphConfig(connected_components=["hydro"], edge_components=["link"]))
        assert g.number_of_nodes == 3
        assert g.edge_comp_map == {(1, 2): (ComponentRef("link", "1"),)}
        assert g.edge_connector_map == {(2, 3): ComponentRef("hydro", "1")}

    @pytest.mark.unit
    def test_deterministic(self, case39):
        """Rebuilding yields identical maps."""
        a, b = build_graph(case39), build_graph(case39)
        assert a.node_comp_map == b.node_comp_map
        assert a.edge_comp_map == b.edge_comp_map
        assert a.edges() == b.edges()

    @pytest.mark.unit
    def test_handshake(self, case39):
        """Sum of degrees is twice the edge count."""
        g = build_graph(case39)
        assert sum(g.degree(n) for n in g.nodes()) == 2 * g.number_of_edges


class TestAnalytics:
    """Test cases for degree, incidence and shortest-path queries."""

    @pytest.mark.unit
    def test_path_degrees(self, path3):
        """A 3-bus path has degrees 1, 2, 1."""
        g = build_graph(path3)
        assert [degree(g, n) for n in g.nodes()] == [1, 2, 1]

    @pytest.mark.unit
    def test_degree_unknown_node(self, path3):
        """Unknown nodes raise UnknownNodeError."""
        with pytest.raises(UnknownNodeError):
            build_graph(path3).degree(42)

    @pytest.mark.unit
    def test_max_degree_case39(self, case39):
        """Bus 16 has the highest degree in the bus/branch graph."""
        g = build_graph(case39, GraphConfig.bus_only())
        assert max_degree(g) == (5, ComponentRef("bus", "16"))

    @pytest.mark.unit
    def test_max_degree_ties(self):
        """Ties go to the smallest node index."""
        g = PowerGraph.from_edges(4, [(1, 2), (3, 4)])
        assert max_degree(g) == (1, ComponentRef("bus", "1"))

    @pytest.mark.unit
    def test_max_degree_single_and_empty(self, network_factory):
        """A lone node has degree 0; an empty graph raises."""
        assert max_degree(build_graph(network_factory(1))) == (0, ComponentRef("bus", "1"))
        with pytest.raises(EmptyGraphError):
            max_degree(PowerGraph.from_edges(0, []))

    @pytest.mark.unit
    def test_incidence_single_edge(self):
        """One edge gives +1 at the lower and -1 at the higher endpoint."""
        m = incidence_matrix(PowerGraph.from_edges(2, [(2, 1)])).toarray()
        assert m.tolist() == [[1.0], [-1.0]]

    @pytest.mark.unit
    def test_incidence_triangle(self):
        """Every column of a triangle's incidence matrix sums to zero."""
        m = incidence_matrix(PowerGraph.from_edges(3, [(1, 2), (2, 3), (1, 3)])).toarray()
        assert m.shape == (3, 3)
        assert np.all(m.sum(axis=0) == 0)
        assert np.all(np.abs(m).sum(axis=0) == 2)

    @pytest.mark.unit
    def test_incidence_case39(self, case39):
        """The bus/branch incidence matrix of case39 is 39 x 46."""
        m = incidence_matrix(build_graph(case39, GraphConfig.bus_only()))
        assert m.shape == (39, 46)
        assert np.all(np.asarray(m.sum(axis=0)) == 0)

    @pytest.mark.unit
    def test_incidence_laplacian(self, case39):
        """B B^T equals the graph Laplacian."""
        g = build_graph(case39, GraphConfig.bus_only())
        b = g.incidence_matrix()
        a = g.adjacency_matrix().toarray()
        laplacian = np.diag(a.sum(axis=1)) - a
        assert np.array_equal((b @ b.T).toarray(), laplacian)

    @pytest.mark.unit
    def test_shortest_paths_path(self, path3):
        """Hop distances along a path."""
        assert shortest_paths(build_graph(path3), 1) == {1: 0, 2: 1, 3: 2}

    @pytest.mark.unit
    def test_shortest_paths_unreachable(self, network_factory):
        """Unreachable nodes map to infinity."""
        assert shortest_paths(build_graph(network_factory(2)), 1) == {1: 0, 2: math.inf}

    @pytest.mark.unit
    def test_shortest_paths_case39(self, case39):
        """Every bus is reachable and distances obey the triangle inequality."""
        g = build_graph(case39, GraphConfig.bus_only())
        dist = shortest_paths(g, 1)
        assert dist[1] == 0
        assert all(math.isfinite(d) for d in dist.values())
        for u, v in g.edges():
            assert abs(dist[u] - dist[v]) <= 1

    @pytest.mark.unit
    def test_shortest_paths_unknown(self, path3):
        """The source must be a node."""
        with pytest.raises(UnknownNodeError):
            shortest_paths(build_graph(path3), 0)

    @pytest.mark.unit
    def test_histogram_star(self):
        """A star with 4 leaves has four degree-1 nodes and one degree-4 hub."""
        g = PowerGraph.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
        assert degree_histogram(g) == {1: 4, 4: 1}

    @pytest.mark.unit
    def test_histogram_case39(self, case39):
        """Bus/branch degree histogram of case39."""
        hist = degree_histogram(build_graph(case39, GraphConfig.bus_only()))
        assert hist == {1: 9, 2: 12, 3: 14, 4: 3, 5: 1}
        assert sum(hist.values()) == 39

    @pytest.mark.unit
    def test_histogram_empty(self):
        """An empty graph has an empty histogram."""
        assert degree_histogram(PowerGraph.from_edges(0, [])) == {}

    @pytest.mark.unit
    def test_subgraph_keeps_maps(self, case5):
        """A subgraph keeps only maps whose endpoints survive."""
        g = build_graph(case5)
        pieces = g.connected_node_sets()
        assert len(pieces) == 1
        sub = g.subgraph([1, 2])
        assert sub.number_of_nodes == 2
        assert list(sub.edge_comp_map) == [(1, 2)]

    @pytest.mark.integration
    def test_case1354_max_degree(self, pglib_case):
        """The 1354-bus PEGASE case peaks at degree 14 on bus 1001."""
        g = build_graph(pglib_case("case1354_pegase"), GraphConfig.bus_only())
        assert max_degree(g) == (14, ComponentRef("bus", "1001"))
        assert max(degree_histogram(g)) == 14
