import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leadsel.errors import GraphError
from leadsel.graph import (
    build_graph,
    enumerate_labeled_trees,
    graph_distance,
    path_graph,
    random_connected_graph,
    random_tree,
)
from leadsel.variance import (
    VarianceProfile,
    build_laplacian,
    laplacian,
    laplacian_pseudoinverse,
    max_variance,
    resistance_distance,
    resistance_matrix,
    steady_state_variances,
    total_variance,
    tree_resistance_matrix,
)

TOL = 1e-9


def test_laplacian_middle_leader(path3):
    dec = build_laplacian(path3, {1})
    assert dec.follower_order == (0, 2)
    assert np.array_equal(dec.L_ff, np.eye(2))
    assert np.array_equal(dec.L_fl, [[-1.0], [-1.0]])


def test_laplacian_end_leader(path3):
    dec = build_laplacian(path3, {0})
    assert dec.follower_order == (1, 2)
    assert np.array_equal(dec.L_ff, [[2.0, -1.0], [-1.0, 1.0]])
    assert np.array_equal(dec.L_fl, [[-1.0], [0.0]])


def test_laplacian_weighted():
    g = build_graph(3, [(0, 1), (1, 2)], [0.5, 1.0])
    dec = build_laplacian(g, {0})
    assert np.array_equal(dec.L_ff, [[3.0, -1.0], [-1.0, 1.0]])


def test_laplacian_rows_sum_to_zero():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(2, 15))
        g = random_connected_graph(n, rng)
        g = g.with_weights(rng.uniform(0.1, 4.0, g.m))
        U = set(rng.choice(n, int(rng.integers(1, n)), replace=False).tolist())
        dec = build_laplacian(g, U)
        full = np.hstack([dec.L_ff, dec.L_fl])
        assert np.allclose(full.sum(axis=1), 0.0, atol=1e-12)
        assert np.array_equal(dec.L_ff, dec.L_ff.T)
        assert np.linalg.eigvalsh(dec.L_ff).min() > 0


@pytest.mark.parametrize(
    "g, leaders, match",
    [
        (path_graph(3), set(), "empty"),
        (build_graph(3, [(0, 1)]), {0}, "not connected"),
        (path_graph(3), {5}, "not nodes"),
    ],
)
def test_laplacian_errors(g, leaders, match):
    with pytest.raises(GraphError, match=match):
        build_laplacian(g, leaders)


def test_variances_path_middle(path3):
    prof = steady_state_variances(path3, {1})
    assert prof.per_follower == {0: 0.5, 2: 0.5}
    assert total_variance(prof) == 1.0
    assert max_variance(prof) == 0.5


def _explicit(g, leaders):
    """Half the diagonal of an explicitly inverted follower block."""
    L = laplacian(g)
    f = [i for i in range(g.n) if i not in leaders]
    inv = np.linalg.inv(L[np.ix_(f, f)])
    return {i: 0.5 * inv[k, k] for k, i in enumerate(f)}


@pytest.mark.parametrize("leader, total, worst", [(0, 4.5, 1.5), (4, 5.0, 1.0)])
def test_broom_values(broom, leader, total, worst):
    prof = steady_state_variances(broom, {leader})
    explicit = _explicit(broom, {leader})
    assert prof.per_follower == pytest.approx(explicit, abs=TOL)
    assert total_variance(prof) == pytest.approx(total, abs=TOL)
    assert max_variance(prof) == pytest.approx(worst, abs=TOL)


def test_profile_aggregates():
    p = VarianceProfile({3: 0.5}, frozenset({0}))
    assert total_variance(p) == 0.5 and max_variance(p) == 0.5
    with pytest.raises(ValueError):
        max_variance(VarianceProfile({}, frozenset({0})))
    assert total_variance(VarianceProfile({}, frozenset({0}))) == 0.0


def test_resistance_identity_and_triangle(triangle):
    assert resistance_distance(triangle, 1, 1) == 0.0
    # 1 ohm in parallel with 2 ohms
    series_parallel = 1.0 * 2.0 / (1.0 + 2.0)
    for i, j in itertools.combinations(range(3), 2):
        assert resistance_distance(triangle, i, j) == pytest.approx(series_parallel, abs=TOL)


def test_resistance_disconnected():
    with pytest.raises(GraphError):
        resistance_distance(build_graph(3, [(0, 1)]), 0, 2)


def test_pseudoinverse_matches_numpy():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(2, 20))
        g = random_connected_graph(n, rng)
        g = g.with_weights(rng.uniform(0.1, 5.0, g.m))
        assert np.allclose(laplacian_pseudoinverse(g), np.linalg.pinv(laplacian(g)), atol=1e-9)


def test_tree_resistance_equals_distance():
    for n in range(2, 9):
        trees = enumerate_labeled_trees(n) if n <= 6 else (
            random_tree(n, np.random.default_rng(n)) for _ in range(300))
        for g in trees:
            R = resistance_matrix(g)
            for i, j in itertools.combinations(range(n), 2):
                assert abs(R[i, j] - graph_distance(g, i, j)) <= TOL


def test_weighted_tree_resistance_is_nu_path_sum():
    rng = np.random.default_rng(4)
    for _ in range(30):
        n = int(rng.integers(2, 25))
        g = random_tree(n, rng).with_weights(rng.uniform(0.1, 5.0, n - 1))
        assert np.allclose(resistance_matrix(g), tree_resistance_matrix(g), atol=TOL)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.integers(0, 2**32 - 1), st.booleans())
def test_variance_is_half_resistance(n, seed, weighted):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng, extra_edges=int(rng.integers(0, n)))
    if weighted:
        g = g.with_weights(rng.uniform(0.1, 5.0, g.m))
    s = int(rng.integers(n))
    R = resistance_matrix(g)
    for i, sigma in steady_state_variances(g, {s}).per_follower.items():
        assert abs(sigma - 0.5 * R[i, s]) <= TOL


def test_adding_leader_never_increases_variance():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(3, 8))
        g = random_connected_graph(n, rng, extra_edges=int(rng.integers(0, 3)))
        for k in range(1, n - 1):
            for U in itertools.combinations(range(n), k):
                base = steady_state_variances(g, U).per_follower
                for v in range(n):
                    if v in U:
                        continue
                    more = steady_state_variances(g, set(U) | {v}).per_follower
                    for i, s in more.items():
                        assert s <= base[i] + 1e-12
