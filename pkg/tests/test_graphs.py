"""Tests for graphs module."""

from __future__ import annotations

import random

import networkx as nx
import pytest

from pautkit.graphs import (
    ColoredDigraph,
    Graph,
    all_colored_digraphs,
    all_graphs,
    canonical_form,
    canonical_key,
    complement,
    graph_classes,
    induced,
    is_isomorphic,
    orbits,
    relabel_structure,
)


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


class TestGraph:
    def test_from_edges_symmetric(self) -> None:
        g = Graph.from_edges(3, [(0, 1), (2, 1)])
        assert g.has_edge(1, 0)
        assert g.has_edge(1, 2)
        assert not g.has_edge(0, 2)
        assert g.edges == [(0, 1), (1, 2)]
        assert g.degree(1) == 2

    def test_rejects_loop(self) -> None:
        with pytest.raises(ValueError, match="Loop"):
            Graph.from_edges(2, [(1, 1)])

    def test_rejects_asymmetric_rows(self) -> None:
        with pytest.raises(ValueError, match="not symmetric"):
            Graph(2, (0b10, 0))

    def test_matrix_matches_one_color_digraph(self, gamma0: Graph) -> None:
        assert gamma0.matrix == ColoredDigraph.from_graph(gamma0).matrix


class TestColoredDigraph:
    def test_matrix_roundtrip(self) -> None:
        mat = [[1, 2, 0], [0, 0, 1], [2, 0, 0]]
        d = ColoredDigraph.from_matrix(mat, 2)
        assert d.num_colors == 2
        assert [list(row) for row in d.matrix] == mat

    def test_rejects_two_colors_on_one_arc(self) -> None:
        with pytest.raises(ValueError, match="has colors"):
            ColoredDigraph.from_colors(2, [[(0, 1)], [(0, 1)]])

    def test_count(self) -> None:
        assert sum(1 for _ in all_colored_digraphs(2, 1)) == 16


def test_complement_involution() -> None:
    for g in all_graphs(4):
        c = complement(g)
        assert complement(c) == g
        assert len(g.edges) + len(c.edges) == 6


def test_induced_relabels(gamma0: Graph) -> None:
    h = induced(gamma0, [1, 2, 3])
    assert h.n == 3
    assert h.edges == [(0, 1)]


def test_graph_class_counts() -> None:
    assert [len(graph_classes(n)) for n in range(6)] == [1, 1, 2, 4, 11, 34]


def test_canonical_key_agrees_with_networkx() -> None:
    rng = random.Random(7)
    graphs = list(all_graphs(5))
    for _ in range(150):
        a, b = rng.choice(graphs), rng.choice(graphs)
        same = canonical_key(a) == canonical_key(b)
        assert same == nx.is_isomorphic(_to_nx(a), _to_nx(b))


def test_canonical_form_is_invariant() -> None:
    rng = random.Random(11)
    for g in graph_classes(5):
        sigma = list(range(5))
        rng.shuffle(sigma)
        assert canonical_form(relabel_structure(g, sigma)) == canonical_form(g)


def test_is_isomorphic_returns_bijection() -> None:
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    other = Graph.from_edges(3, [(0, 2), (2, 1)])
    sigma = is_isomorphic(p3, other)
    assert sigma is not None
    assert relabel_structure(p3, sigma) == other
    assert is_isomorphic(p3, complement(p3)) is None


def test_is_isomorphic_with_pins() -> None:
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert is_isomorphic(p3, p3, fixed={0: 2}) is not None
    assert is_isomorphic(p3, p3, fixed={0: 1}) is None


def test_orbits(gamma0: Graph) -> None:
    assert orbits(gamma0) == [(0, 2), (1,), (3,)]
    k3 = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    assert orbits(k3) == [(0, 1, 2)]


def test_colored_isomorphism_respects_colors() -> None:
    a = ColoredDigraph.from_colors(2, [[(0, 1)], []])
    b = ColoredDigraph.from_colors(2, [[], [(0, 1)]])
    c = ColoredDigraph.from_colors(2, [[(1, 0)], []])
    assert is_isomorphic(a, b) is None
    assert is_isomorphic(a, c) == (1, 0)
