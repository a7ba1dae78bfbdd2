from __future__ import annotations

import itertools

import networkx as nx
import pytest

from copshield import generators as G
from copshield.errors import DisconnectedError, InvalidVertexError, PreconditionError
from copshield.graph import (Geodesic, Graph, ball, ball_of_set, center_vertex, components_after_removal,
                             geodesic_between, is_vertex_cover, longest_geodesic, min_vertex_cover,
                             open_neighborhood_of_set, set_diameter, vertex_cover_number)

import corpus
import oracles


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


SAMPLE = corpus.named_graphs(14) + corpus.gnp_sample(15, (5, 14), seed=90)


@pytest.mark.parametrize("g", SAMPLE, ids=lambda g: g.name)
def test_distances_and_diameter_match_networkx(g):
    h = to_nx(g)
    lengths = dict(nx.all_pairs_shortest_path_length(h))
    for u in g.vertices():
        for v in g.vertices():
            assert g.dist(u, v) == lengths[u][v]
    assert g.diameter() == nx.diameter(h)


@pytest.mark.parametrize("g", SAMPLE, ids=lambda g: g.name)
def test_min_vertex_cover_is_minimum(g):
    cover = min_vertex_cover(g)
    assert is_vertex_cover(g, cover)
    if g.n <= 12:
        assert len(cover) == oracles.brute_vertex_cover_number(oracles.adjacency_sets(g))


def test_vertex_cover_of_known_graphs():
    assert vertex_cover_number(G.petersen()) == 6
    assert vertex_cover_number(G.path(7)) == 3
    assert vertex_cover_number(G.star(8)) == 1
    assert vertex_cover_number(G.complete(5)) == 4
    assert vertex_cover_number(Graph(1)) == 0


def test_geodesics_are_shortest_and_canonical():
    g = G.grid(3, 4)
    for u, v in itertools.combinations(g.vertices(), 2):
        p = geodesic_between(g, u, v)
        assert p.start == u and p.end == v and p.length == g.dist(u, v)
        assert p == geodesic_between(g, u, v)
    lg = longest_geodesic(g)
    assert lg.length == g.diameter()


def test_geodesic_certify_rejects_non_shortest_path():
    g = G.cycle(6)
    with pytest.raises(PreconditionError):
        Geodesic((0, 1, 2, 3, 4)).certify(g)
    Geodesic((0, 1, 2, 3)).certify(g)


def test_balls_and_neighbourhoods():
    g = G.path(7)
    assert ball(g, 3, 0) == {3}
    assert ball(g, 3, 2) == {1, 2, 3, 4, 5}
    assert ball_of_set(g, {0, 6}, 1) == {0, 1, 5, 6}
    assert open_neighborhood_of_set(g, {2, 3}) == {1, 4}
    with pytest.raises(ValueError):
        ball(g, 0, -1)


def test_components_after_removal_ordered_by_minimum():
    g = G.path(7)
    assert components_after_removal(g, {3}) == [frozenset({0, 1, 2}), frozenset({4, 5, 6})]
    assert components_after_removal(g, set(g.vertices())) == []
    assert components_after_removal(g, ()) == [frozenset(g.vertices())]


def test_set_diameter_uses_ambient_distances():
    g = G.cycle(8)
    assert set_diameter(g, {0, 4}) == 4
    assert set_diameter(g, {2}) == 0
    with pytest.raises(PreconditionError):
        set_diameter(g, ())


def test_induced_subgraph_mapping():
    g = G.petersen()
    sub, to_parent = g.induced_subgraph({9, 1, 4, 6})
    assert to_parent == (1, 4, 6, 9)
    for a, b in sub.edges():
        assert g.has_edge(to_parent[a], to_parent[b])
    assert sub.m == sum(g.has_edge(u, v) for u, v in itertools.combinations(to_parent, 2))


def test_center_vertex_minimises_eccentricity():
    g = G.path(5)
    assert center_vertex(g) == 2
    assert center_vertex(G.star(4)) == 0


def test_invalid_vertices_and_disconnection():
    with pytest.raises(InvalidVertexError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    g = Graph(4, [(0, 1), (2, 3)])
    assert not g.is_connected()
    with pytest.raises(DisconnectedError):
        g.require_connected()
    with pytest.raises(DisconnectedError):
        geodesic_between(g, 0, 3)
    with pytest.raises(InvalidVertexError):
        ball(G.path(3), 5, 1)


def test_graph_equality_and_hash_ignore_names():
    a = Graph(3, [(0, 1), (1, 2)], name="a")
    b = Graph(3, [(1, 2), (0, 1)], name="b")
    assert a == b and hash(a) == hash(b)
