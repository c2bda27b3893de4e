"""Steady-state variances of leader-follower consensus and resistance distances.

With leader set ``U`` the follower block ``L_ff`` of the (weighted) Laplacian
is symmetric positive definite on a connected graph, and follower ``i`` has
steady-state variance ``0.5 * inv(L_ff)[i, i]``.  Total and maximum of these
give the two performance measures used for leader selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import linalg

from .errors import GraphError, NumericalError
from .graph import Graph, is_connected, is_tree, distance_matrix


@dataclass(frozen=True)
class LaplacianDecomposition:
    follower_order: tuple[int, ...]
    leader_order: tuple[int, ...]
    L_ff: np.ndarray
    L_fl: np.ndarray


@dataclass(frozen=True)
class VarianceProfile:
    per_follower: dict[int, float]
    leader_set: frozenset[int]

    def as_array(self, n: int) -> np.ndarray:
        """Length-``n`` vector with zeros at the leaders."""
        out = np.zeros(n)
        for i, s in self.per_follower.items():
            out[i] = s
        return out


def laplacian(g: Graph) -> np.ndarray:
    """Full conductance matrix: ``-1/nu`` off the diagonal, row sums zero."""
    L = np.zeros((g.n, g.n))
    for (u, v), w in zip(g.edges, g.nu):
        c = 1.0 / w
        L[u, v] -= c
        L[v, u] -= c
        L[u, u] += c
        L[v, v] += c
    return L


def _check_leaders(g: Graph, leaders: Iterable[int]) -> frozenset[int]:
    U = frozenset(int(x) for x in leaders)
    if not U:
        raise GraphError("leader set is empty")
    bad = [x for x in U if not 0 <= x < g.n]
    if bad:
        raise GraphError(f"leaders {sorted(bad)} are not nodes of the graph")
    if not is_connected(g):
        raise GraphError("graph is not connected")
    return U


def build_laplacian(g: Graph, leaders: Iterable[int]) -> LaplacianDecomposition:
    U = _check_leaders(g, leaders)
    followers = tuple(i for i in range(g.n) if i not in U)
    lead = tuple(sorted(U))
    L = laplacian(g)
    return LaplacianDecomposition(
        followers, lead, L[np.ix_(followers, followers)], L[np.ix_(followers, lead)]
    )


def _diag_of_inverse(M: np.ndarray) -> np.ndarray:
    if M.shape[0] == 0:
        return np.zeros(0)
    try:
        factor = linalg.cho_factor(M, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError("follower Laplacian is not positive definite") from exc
    inv = linalg.cho_solve(factor, np.eye(M.shape[0]), check_finite=False)
    return np.diag(inv).copy()


def steady_state_variances(g: Graph, leaders: Iterable[int]) -> VarianceProfile:
    dec = build_laplacian(g, leaders)
    diag = _diag_of_inverse(dec.L_ff)
    return VarianceProfile(
        {i: 0.5 * float(d) for i, d in zip(dec.follower_order, diag)},
        frozenset(dec.leader_order),
    )


def total_variance(p: VarianceProfile) -> float:
    return float(sum(p.per_follower.values()))


def max_variance(p: VarianceProfile) -> float:
    if not p.per_follower:
        raise ValueError("maximum variance is undefined with no followers")
    return float(max(p.per_follower.values()))


def laplacian_pseudoinverse(g: Graph) -> np.ndarray:
    """Moore-Penrose inverse of the Laplacian of a connected graph.

    Node 0 is grounded, the reduced system is inverted by Cholesky, and the
    result is projected onto the complement of the all-ones vector.
    """
    if not is_connected(g):
        raise GraphError("graph is not connected")
    n = g.n
    X = np.zeros((n, n))
    if n > 1:
        L = laplacian(g)
        red = L[1:, 1:]
        try:
            factor = linalg.cho_factor(red, lower=True, check_finite=False)
        except linalg.LinAlgError as exc:
            raise NumericalError("reduced Laplacian is not positive definite") from exc
        X[1:, 1:] = linalg.cho_solve(factor, np.eye(n - 1), check_finite=False)
    P = np.eye(n) - 1.0 / n
    return P @ X @ P


def resistance_matrix(g: Graph) -> np.ndarray:
    """Effective resistance between every pair, each edge a ``nu``-ohm resistor."""
    Q = laplacian_pseudoinverse(g)
    d = np.diag(Q)
    R = d[:, None] + d[None, :] - 2.0 * Q
    np.fill_diagonal(R, 0.0)
    return R


def resistance_distance(g: Graph, i: int, j: int) -> float:
    if i == j:
        if not is_connected(g):
            raise GraphError("graph is not connected")
        return 0.0
    return float(resistance_matrix(g)[i, j])


def tree_resistance_matrix(g: Graph) -> np.ndarray:
    """Path sums of ``nu`` on a tree; equals :func:`resistance_matrix` there."""
    if not is_tree(g):
        raise GraphError("graph is not a tree")
    return distance_matrix(g, metric="resistance")
