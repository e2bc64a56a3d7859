from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from oracles import is_srg, to_nx
from shannon_bounds.graph import (
    Graph,
    VertexSet,
    apex_extension,
    as_mask,
    complement,
    complete,
    cycle,
    disjoint_union,
    empty,
    format_graph,
    graph_power,
    induced_subgraph,
    parse_graph,
    path,
    random_graph,
    read_graph,
    schlafli_complement,
    strong_product,
    write_graph,
)


def test_named_graphs():
    assert cycle(5).num_edges == 5
    assert all(cycle(7).degree(v) == 2 for v in range(7))
    assert complete(4).num_edges == 6
    assert empty(3).num_edges == 0
    assert path(4).edges() == [(0, 1), (1, 2), (2, 3)]
    assert path(1).num_edges == 0


@pytest.mark.parametrize("bad", [lambda: cycle(2), lambda: complete(0), lambda: path(0), lambda: empty(0)])
def test_named_graph_errors(bad):
    with pytest.raises(ValueError):
        bad()


def test_schlafli_complement_is_srg():
    s = schlafli_complement()
    assert is_srg(s, 27, 10, 1, 5)
    assert s.labels[0] == "a1" and s.labels[-1] == "c56"


def test_validation_rejects_bad_rows():
    with pytest.raises(ValueError):
        Graph(2, (0b10, 0))  # not symmetric
    with pytest.raises(ValueError):
        Graph(2, (0b01, 0))  # self-loop
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_adjacency([[0, 1], [0, 0]])


def test_vertex_sets():
    s = VertexSet.of([0, 2], 4)
    assert list(s) == [0, 2] and len(s) == 2 and 2 in s and 1 not in s
    assert str(s) == "{0,2}"
    assert as_mask(s, 4) == 0b101 and as_mask([1], 4) == 2 and as_mask(3, 4) == 3
    with pytest.raises(ValueError):
        as_mask(s, 5)
    with pytest.raises(ValueError):
        VertexSet.of([4], 4)


@given(graphs(max_n=7))
def test_complement_is_involution(g):
    assert complement(complement(g)) == g
    assert g.num_edges + complement(g).num_edges == g.n * (g.n - 1) // 2


@given(graphs(max_n=4), graphs(max_n=4))
def test_strong_product_matches_definition(g, h):
    p = strong_product(g, h)
    assert p.n == g.n * h.n
    for (a, b), (c, d) in itertools.combinations(itertools.product(range(g.n), range(h.n)), 2):
        expect = (a == c or g.adjacent(a, c)) and (b == d or h.adjacent(b, d))
        assert p.adjacent(a * h.n + b, c * h.n + d) == expect


@given(graphs(max_n=4), graphs(max_n=4))
def test_strong_product_agrees_with_networkx(g, h):
    ours = strong_product(g, h)
    theirs = __import__("networkx").strong_product(to_nx(g), to_nx(h))
    assert ours.num_edges == theirs.number_of_edges()


def test_graph_power():
    assert graph_power(cycle(5), 1) == cycle(5)
    assert graph_power(cycle(5), 2) == strong_product(cycle(5), cycle(5))
    with pytest.raises(ValueError):
        graph_power(cycle(5), 0)


@given(graphs(max_n=5), graphs(max_n=5))
def test_disjoint_union(g, h):
    u = disjoint_union(g, h)
    assert u.n == g.n + h.n and u.num_edges == g.num_edges + h.num_edges
    assert not any(u.adjacent(i, g.n + j) for i in range(g.n) for j in range(h.n))


@given(graphs(max_n=7), st.data())
def test_induced_subgraph(g, data):
    keep = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    h = induced_subgraph(g, keep)
    order = sorted(keep)
    for a, b in itertools.combinations(range(h.n), 2):
        assert h.adjacent(a, b) == g.adjacent(order[a], order[b])
    assert h.labels == tuple(str(v) for v in order)


def test_induced_subgraph_empty_set():
    with pytest.raises(ValueError):
        induced_subgraph(cycle(5), [])


def test_apex_extension():
    g = apex_extension(cycle(5), [0, 2], label="apex")
    assert g.n == 6 and g.neighbors(5) == [0, 2] and g.label(5) == "apex"
    assert g.adjacent(0, 5) and not g.adjacent(1, 5)


def test_without_edge():
    g = cycle(4).without_edge(0, 1)
    assert not g.adjacent(0, 1) and g.num_edges == 3
    with pytest.raises(ValueError):
        g.without_edge(0, 1)


def test_labels_and_index_of():
    s = schlafli_complement()
    assert s.index_of("b1") == 6
    assert cycle(5).index_of("3") == 3
    with pytest.raises(KeyError):
        cycle(5).index_of("9")


@given(graphs(max_n=8))
def test_text_roundtrip(g):
    assert parse_graph(format_graph(g)) == g


def test_text_roundtrip_keeps_labels(tmp_path):
    s = schlafli_complement()
    write_graph(s, tmp_path / "s.g")
    back = read_graph(tmp_path / "s.g")
    assert back == s and back.labels == s.labels


@pytest.mark.parametrize(
    "text", ["", "3 1\n0 1\n1 2\n", "2 1\n0 1 2\n", "2 1\n0 0\n", "2 0\n# label 0 a\n"]
)
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_graph(text)


def test_adjacency_matrix_and_random_graph():
    g = random_graph(8, 0.5, 3)
    assert g == random_graph(8, 0.5, 3)
    a = g.adjacency
    assert np.array_equal(a, a.T) and not a.diagonal().any()
    assert Graph.from_adjacency(a) == g


def test_clique_and_independence_predicates():
    g = cycle(5)
    assert g.is_clique([0, 1]) and not g.is_clique([0, 2])
    assert g.is_independent([0, 2]) and not g.is_independent([0, 1])
