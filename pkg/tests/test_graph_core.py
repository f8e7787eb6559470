"""Tests for the graph representation, edge-list I/O and component extraction.

Covers:
- Simple-graph construction (self-loops, duplicates, reverse pairs)
- Edge-list parsing, label tables, SNAP node header, error reporting
- Write/load round trip including isolated nodes
- Largest connected component (weak, tie-break, idempotence) against networkx
- Density
"""

import networkx as nx
import numpy as np
import pytest

from app.exceptions import EdgeListParseError, EmptyGraphError
from app.services.graph.core import (
    Graph,
    GraphLabelTable,
    density,
    label_sort_key,
    largest_connected_component,
)
from app.services.graph.io import load_edge_list, write_edge_list
from tests.conftest import make_random_graph


# ---------- construction ----------


class TestGraphConstruction:
    def test_self_loops_dropped_and_counted(self):
        g = Graph.from_edges(3, [(0, 1), (1, 1), (2, 2)])
        assert g.number_of_edges == 1
        assert g.metadata["self_loops_dropped"] == 2

    def test_undirected_reverse_pairs_collapse(self):
        g = Graph.from_edges(2, [(0, 1), (1, 0), (0, 1)])
        assert g.number_of_edges == 1
        assert g.metadata["duplicates_collapsed"] == 2

    def test_directed_keeps_both_directions(self):
        g = Graph.from_edges(2, [(0, 1), (1, 0)], directed=True)
        assert g.number_of_edges == 2

    def test_zero_nodes_rejected(self):
        with pytest.raises(EmptyGraphError):
            Graph.from_edges(0, [])

    def test_endpoint_out_of_range(self):
        with pytest.raises(ValueError, match="node ids"):
            Graph.from_edges(2, [(0, 2)])

    def test_undirected_symmetry(self, triangle):
        adj = triangle.adjacency()
        assert (adj != adj.T).nnz == 0
        assert triangle.degrees().sum() == 2 * triangle.number_of_edges

    def test_directed_consistency(self, small_directed):
        for i in range(small_directed.n):
            for j in small_directed.successors(i):
                assert i in small_directed.predecessors(int(j))

    def test_neighbors_undefined_on_directed(self, small_directed):
        with pytest.raises(ValueError):
            small_directed.neighbors(0)

    def test_directed_degree_is_in_plus_out(self, small_directed):
        assert small_directed.degrees().tolist() == [2, 2, 2]

    def test_subgraph_redensifies_and_keeps_labels(self):
        labels = GraphLabelTable(("a", "b", "c", "d"))
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], labels=labels)
        sub = g.subgraph([1, 2, 3])
        assert sub.n == 3
        assert sub.labels.labels == ("b", "c", "d")
        assert sub.edges().tolist() == [[0, 1], [1, 2]]


class TestLabelTable:
    def test_integer_labels_sort_numerically_first(self):
        labels = ["10", "x", "2"]
        assert sorted(labels, key=label_sort_key) == ["2", "10", "x"]

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            GraphLabelTable(("a", "a"))


# ---------- edge-list I/O ----------


class TestLoadEdgeList:
    def test_simple_path(self, write_edges):
        g = load_edge_list(write_edges("0 1\n1 2\n"), directed=False)
        assert g.n == 3
        assert g.number_of_edges == 2

    def test_comments_duplicates_and_reverse(self, write_edges):
        g = load_edge_list(write_edges("# c\n0 1\n0 1\n1 0\n"), directed=False)
        assert g.n == 2
        assert g.number_of_edges == 1

    def test_directed_self_loop_counted(self, write_edges):
        g = load_edge_list(write_edges("0 1\n1 1\n"), directed=True)
        assert g.n == 2
        assert g.edges().tolist() == [[0, 1]]
        assert g.metadata["self_loops_dropped"] == 1

    def test_malformed_line_reports_line_number(self, write_edges):
        path = write_edges("0 1\n1 2 3\n")
        with pytest.raises(EdgeListParseError) as exc:
            load_edge_list(path, directed=False)
        assert exc.value.line_number == 2
        assert ":2:" in str(exc.value)

    def test_empty_file(self, write_edges):
        with pytest.raises(EmptyGraphError):
            load_edge_list(write_edges("# nothing\n\n"), directed=False)

    def test_string_labels_in_first_appearance_order(self, write_edges):
        g = load_edge_list(write_edges("bob alice\nalice carol\n"), directed=False)
        assert g.labels.labels == ("bob", "alice", "carol")

    def test_non_canonical_integers_are_distinct(self, write_edges):
        g = load_edge_list(write_edges("07 7\n"), directed=False)
        assert g.n == 2
        assert "07" in g.labels and "7" in g.labels

    def test_nodes_header_adds_isolated_nodes(self, write_edges):
        g = load_edge_list(write_edges("# Nodes: 5 Edges: 1\n0 1\n"), directed=False)
        assert g.n == 5
        assert g.degrees().tolist() == [1, 1, 0, 0, 0]


class TestRoundTrip:
    @pytest.mark.parametrize("directed", [False, True])
    def test_write_then_load_is_identical(self, tmp_path, directed):
        g = make_random_graph(30, 0.1, directed, seed=3)
        path = write_edge_list(g, tmp_path / "g.txt")
        back = load_edge_list(path, directed=directed)
        assert back.n == g.n
        assert np.array_equal(back.edges(), g.edges())

    def test_isolated_nodes_survive(self, tmp_path):
        g = Graph.from_edges(6, [(0, 1), (3, 4)])
        back = load_edge_list(write_edge_list(g, tmp_path / "g.txt"), directed=False)
        assert back.n == 6
        assert np.array_equal(back.edges(), g.edges())


# ---------- components ----------


class TestLargestConnectedComponent:
    def test_path_plus_isolated(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2)])
        lcc = largest_connected_component(g)
        assert lcc.n == 3
        assert lcc.labels.labels == ("0", "1", "2")

    def test_equal_size_tie_goes_to_smallest_label(self):
        # triangles {3,4,5} and {0,1,2} plus isolated 6
        g = Graph.from_edges(7, [(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)])
        lcc = largest_connected_component(g)
        assert lcc.labels.labels == ("0", "1", "2")

    def test_tie_break_compares_integer_labels_numerically(self, write_edges):
        g = load_edge_list(write_edges("10 11\n9 8\n"), directed=False)
        lcc = largest_connected_component(g)
        assert set(lcc.labels.labels) == {"8", "9"}

    def test_directed_uses_weak_connectivity(self):
        g = Graph.from_edges(3, [(0, 1), (2, 1)], directed=True)
        assert largest_connected_component(g).n == 3

    def test_idempotent(self):
        g = make_random_graph(40, 0.03, False, seed=1)
        once = largest_connected_component(g)
        twice = largest_connected_component(once)
        assert np.array_equal(once.edges(), twice.edges())
        assert once.labels == twice.labels

    @pytest.mark.parametrize("seed", range(5))
    def test_size_matches_networkx(self, seed):
        g = make_random_graph(60, 0.03, True, seed=seed)
        nxg = nx.DiGraph()
        nxg.add_nodes_from(range(g.n))
        nxg.add_edges_from(map(tuple, g.edges()))
        expected = max(len(c) for c in nx.weakly_connected_components(nxg))
        assert largest_connected_component(g).n == expected


class TestDensity:
    def test_complete_graph(self):
        g = Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
        assert density(g) == 1.0

    def test_path(self, path3):
        assert density(path3) == pytest.approx(2 / 3)

    def test_directed(self, small_directed):
        assert density(small_directed) == pytest.approx(3 / 6)

    def test_single_node_rejected(self):
        with pytest.raises(ValueError):
            density(Graph.from_edges(1, []))
