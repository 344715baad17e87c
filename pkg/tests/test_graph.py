import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argldpc.graph import (ACYCLIC, UNREACHABLE, BipartiteGraph, GraphError, L, R, Side,
                           VertexRef, bfs_distances, degree_profile, girth, new_graph)

from oracles import cycle_enumeration_girth


@st.composite
def small_graphs(draw, max_vertices=16):
    n_left = draw(st.integers(1, max_vertices - 1))
    n_right = draw(st.integers(1, max_vertices - n_left))
    pairs = list(itertools.product(range(n_left), range(n_right)))
    density = draw(st.floats(0.0, 1.0))
    keep = draw(st.lists(st.floats(0, 1), min_size=len(pairs), max_size=len(pairs)))
    edges = [pr for pr, u in zip(pairs, keep) if u < density]
    return n_left, n_right, edges


def build(n_left, n_right, edges):
    g = BipartiteGraph(n_left, n_right)
    for a, b in edges:
        g.add_edge(L(a + 1), R(b + 1))
    return g


def six_cycle():
    # L1 R1 L2 R2 L3 R3 L1
    return BipartiteGraph.from_edges(3, 3, [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)])


class TestNewGraph:
    def test_small(self):
        g = new_graph(4, 2)
        assert g.n_vertices == 6 and g.edge_count == 0
        assert g.left_degrees() == [0] * 4 and g.right_degrees() == [0] * 2

    def test_code_sized(self):
        g = new_graph(504, 252)
        assert g.n_vertices == 756 and g.edge_count == 0

    @pytest.mark.parametrize("size", [(1, 0), (0, 3), (-1, 2)])
    def test_degenerate(self, size):
        with pytest.raises(GraphError):
            new_graph(*size)


class TestAddEdge:
    def test_degrees(self):
        g = new_graph(4, 2).add_edge(L(1), R(1))
        assert g.degree(L(1)) == 1 and g.degree(R(1)) == 1
        assert g.has_edge(R(1), L(1))

    def test_parallel_rejected(self):
        g = new_graph(4, 2).add_edge(L(1), R(1))
        with pytest.raises(GraphError):
            g.add_edge(L(1), R(1))
        with pytest.raises(GraphError):
            g.add_edge(R(1), L(1))

    def test_same_side_and_range(self):
        g = new_graph(4, 2)
        with pytest.raises(GraphError):
            g.add_edge(L(1), L(2))
        with pytest.raises(GraphError):
            g.add_edge(L(5), R(1))
        with pytest.raises(GraphError):
            g.add_edge(L(1), R(3))

    def test_many_additions(self):
        g = new_graph(504, 252)
        for e in range(1512):
            g.add_edge(L(e % 504 + 1), R((e % 504 + e // 504 * 7) % 252 + 1))
        assert g.edge_count == 1512
        assert sum(g.left_degrees()) == sum(g.right_degrees()) == 1512

    def test_insertion_order(self):
        g = BipartiteGraph.from_edges(3, 2, [(2, 1), (1, 2), (3, 1)])
        assert g.edges() == [(L(2), R(1)), (L(1), R(2)), (L(3), R(1))]
        assert g.neighbors(R(1)) == [L(2), L(3)]


def test_vertex_ref_text():
    assert str(L(3)) == "L3" and str(R(12)) == "R12"
    assert VertexRef.parse("R7") == R(7)
    assert L(1).side.other is Side.RIGHT
    with pytest.raises(ValueError):
        VertexRef(Side.LEFT, 0)


class TestBfs:
    def test_complete(self):
        d = bfs_distances(BipartiteGraph.complete(2, 2), L(1))
        assert d[R(1)] == d[R(2)] == 1
        assert d[L(2)] == 2 and d[L(1)] == 0

    def test_path(self):
        g = BipartiteGraph.from_edges(3, 1, [(1, 1), (2, 1)])
        d = bfs_distances(g, L(1))
        assert d[L(2)] == 2
        assert d[L(3)] == UNREACHABLE
        assert d[L(3)] > 10**9

    def test_six_cycle(self):
        assert bfs_distances(six_cycle(), L(1))[R(2)] == 3


class TestGirth:
    def test_examples(self):
        assert girth(BipartiteGraph.complete(2, 2)) == 4
        assert girth(six_cycle()) == 6
        assert girth(new_graph(3, 3)) == ACYCLIC

    def test_forest(self):
        g = BipartiteGraph.from_edges(4, 3, [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)])
        assert girth(g) == ACYCLIC == math.inf

    def test_larger_complete(self):
        assert girth(BipartiteGraph.complete(5, 7)) == 4


class TestDegreeProfile:
    def test_empty(self):
        assert degree_profile(new_graph(4, 2)) == ({0: 4}, {0: 2})

    def test_complete(self):
        assert degree_profile(BipartiteGraph.complete(2, 2)) == ({2: 2}, {2: 2})


@settings(max_examples=200, deadline=None)
@given(small_graphs())
def test_girth_matches_cycle_enumeration(case):
    g = build(*case)
    got = girth(g)
    assert got == cycle_enumeration_girth(*case)
    assert got == ACYCLIC or got % 2 == 0


@settings(max_examples=100, deadline=None)
@given(small_graphs(), st.data())
def test_distance_axioms(case, data):
    g = build(*case)
    verts = [L(k) for k in range(1, g.n_left + 1)] + [R(k) for k in range(1, g.n_right + 1)]
    dist = {v: bfs_distances(g, v) for v in verts}
    for u in verts:
        assert dist[u][u] == 0
        for v in verts:
            assert dist[u][v] == dist[v][u]
            if dist[u][v] != UNREACHABLE:
                # bipartite: parity of a distance is fixed by the sides
                assert dist[u][v] % 2 == (0 if u.side is v.side else 1)
    for _ in range(20):
        a, b, c = (data.draw(st.sampled_from(verts)) for _ in range(3))
        assert dist[a][c] <= dist[a][b] + dist[b][c]


@settings(max_examples=100, deadline=None)
@given(small_graphs())
def test_degree_sum(case):
    g = build(*case)
    k = len(case[2])
    assert sum(g.left_degrees()) + sum(g.right_degrees()) == 2 * k
    left, right = degree_profile(g)
    assert sum(left.values()) == g.n_left and sum(right.values()) == g.n_right


def test_csr_layout():
    g = BipartiteGraph.from_edges(2, 2, [(1, 2), (2, 1)])
    indptr, indices = g.to_csr()
    assert indptr.tolist() == [0, 1, 2, 3, 4]
    assert indices.tolist() == [3, 2, 1, 0]
    assert isinstance(indptr, np.ndarray)
