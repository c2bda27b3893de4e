import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leadsel.errors import GraphError, GuardError
from leadsel.graph import (
    balanced_binary_tree,
    broom_graph,
    build_graph,
    distance_matrix,
    enumerate_labeled_trees,
    format_edge_list,
    graph_distance,
    is_connected,
    is_tree,
    parse_edge_list,
    path_graph,
    prufer_to_tree,
    random_connected_graph,
    random_tree,
    read_edge_list,
    star_graph,
)


def test_build_path():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.nu == (1.0, 1.0)
    assert g.adjacency == ((1,), (0, 2), (1,))


def test_build_normalizes_edge_order():
    g = build_graph(3, [(2, 1), (1, 0)], [2.0, 3.0])
    assert g.edges == ((0, 1), (1, 2))
    assert g.nu == (3.0, 2.0)
    assert g.cost(2, 1) == 0.5


@pytest.mark.parametrize(
    "n, edges, weights, match",
    [
        (2, [(0, 0)], None, "self-loop"),
        (3, [(0, 1), (1, 0)], None, "duplicate edge"),
        (3, [(0, 1)], [0.0], "non-positive"),
        (3, [(0, 1)], [-1.0], "non-positive"),
        (3, [(0, 3)], None, "outside"),
        (3, [(0, 1)], [1.0, 2.0], "weights"),
    ],
)
def test_build_rejects(n, edges, weights, match):
    with pytest.raises(GraphError, match=match):
        build_graph(n, edges, weights)


def test_error_names_edge():
    with pytest.raises(GraphError, match=r"duplicate edge \(2, 1\)"):
        build_graph(4, [(0, 1), (1, 2), (2, 1)])


def test_broom_shape(broom):
    assert broom.n == 7 and broom.m == 6
    assert broom.degree(0) == 4
    assert sorted(broom.degree(i) for i in range(7)) == [1, 1, 1, 1, 2, 2, 4]
    assert is_connected(broom) and is_tree(broom)


def test_connectivity_and_tree():
    assert is_connected(path_graph(3))
    assert not is_connected(build_graph(2, []))
    assert is_tree(path_graph(3))
    assert not is_tree(build_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert not is_tree(build_graph(4, [(0, 1), (2, 3)]))
    assert is_tree(build_graph(1, []))


def test_graph_distance_examples():
    g = path_graph(3)
    assert graph_distance(g, 0, 2) == 2
    assert graph_distance(g, 1, 1) == 0
    w = build_graph(3, [(0, 1), (1, 2)], [2.0, 0.5])
    assert graph_distance(w, 0, 2) == pytest.approx(2.5, abs=1e-15)


def test_graph_distance_disconnected():
    with pytest.raises(GraphError):
        graph_distance(build_graph(3, [(0, 1)]), 0, 2)


def test_distance_matrix_matches_networkx():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 25))
        g = random_connected_graph(n, rng, extra_edges=int(rng.integers(0, 5)))
        g = g.with_weights(rng.uniform(0.1, 5.0, g.m))
        G = nx.Graph()
        G.add_nodes_from(range(n))
        for (u, v), w in zip(g.edges, g.nu):
            G.add_edge(u, v, length=1.0 / w, res=w)
        want = dict(nx.all_pairs_dijkstra_path_length(G, weight="length"))
        got = distance_matrix(g)
        want_r = dict(nx.all_pairs_dijkstra_path_length(G, weight="res"))
        got_r = distance_matrix(g, metric="resistance")
        for i, j in itertools.product(range(n), repeat=2):
            assert got[i, j] == pytest.approx(want[i][j], abs=1e-9)
            assert got_r[i, j] == pytest.approx(want_r[i][j], abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 14), st.integers(0, 2**32 - 1))
def test_tree_distance_is_a_metric(n, seed):
    rng = np.random.default_rng(seed)
    g = random_tree(n, rng).with_weights(rng.uniform(0.2, 3.0, n - 1))
    D = distance_matrix(g)
    assert np.allclose(D, D.T, atol=1e-12)
    assert np.all(np.diag(D) == 0)
    for i, j, k in itertools.product(range(n), repeat=3):
        assert D[i, k] <= D[i, j] + D[j, k] + 1e-9


@pytest.mark.parametrize("n, count", [(2, 1), (3, 3), (4, 16), (5, 125), (6, 1296)])
def test_enumeration_counts_and_distinct(n, count):
    trees = list(enumerate_labeled_trees(n))
    assert len(trees) == count == n ** (n - 2)
    assert len({t.edges for t in trees}) == count
    assert all(is_tree(t) and t.m == n - 1 for t in trees)


@pytest.mark.slow
def test_enumeration_n8_count():
    seen = set()
    for t in enumerate_labeled_trees(8):
        seen.add(t.edges)
    assert len(seen) == 262144


def test_enumeration_matches_networkx_prufer():
    for seq in itertools.product(range(6), repeat=4):
        ours = prufer_to_tree(seq).edges
        theirs = tuple(sorted(tuple(sorted(e)) for e in nx.from_prufer_sequence(list(seq)).edges))
        assert ours == theirs


def test_enumeration_matches_sympy_prufer():
    from sympy.combinatorics.prufer import Prufer

    for seq in itertools.product(range(5), repeat=3):
        want = tuple(sorted(tuple(sorted(e)) for e in Prufer(list(seq)).tree_repr))
        assert prufer_to_tree(seq).edges == want


@pytest.mark.parametrize("n", [0, 1, 10])
def test_enumeration_guard(n):
    with pytest.raises(GuardError):
        next(enumerate_labeled_trees(n))


def test_edge_list_round_trip(tmp_path):
    g = build_graph(4, [(0, 1), (1, 2), (1, 3)], [1.0, 0.25, 3.0])
    p = tmp_path / "g.txt"
    p.write_text("# a comment\n" + format_edge_list(g))
    h = read_edge_list(p)
    assert h == g


def test_edge_list_default_weight():
    g = parse_edge_list("3 2\n0 1\n# skip\n1 2 2.5\n")
    assert g.nu == (1.0, 2.5)


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "3 2\n0 1\n", "3 1\n0 x\n", "2 1\n0 1 0\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_rewire_keeps_weights():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)], [1.0, 2.0, 3.0])
    h = g.rewire((1, 2), (0, 3), 0.5)
    assert is_tree(h)
    assert h.noise_variance(2, 3) == 3.0 and h.noise_variance(0, 3) == 0.5
    with pytest.raises(GraphError):
        g.rewire((0, 2), (0, 3))


def test_graph_is_immutable(path3):
    with pytest.raises(AttributeError):
        path3.n = 4


def test_families():
    assert star_graph(5).degree(0) == 4
    b = balanced_binary_tree(3)
    assert b.n == 15 and is_tree(b)
    assert is_tree(broom_graph(leaves=5, handle=2))
