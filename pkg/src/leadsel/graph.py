"""Undirected weighted graphs, structural predicates, distances and tree families.

Nodes are the integers ``0..n-1``; their integer order is the single total
order used for every tie-break in the package.  Each edge carries a noise
variance ``nu > 0`` (1.0 for unweighted graphs) and a derived cost
``c = 1 / nu`` that serves as the edge length for :func:`graph_distance`.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphError, GuardError
from . import kernels

Edge = tuple[int, int]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on nodes ``0..n-1``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v`` in sorted
    order and ``nu`` the matching noise variances.  Use :func:`build_graph`
    rather than calling the constructor directly.
    """

    n: int
    edges: tuple[Edge, ...]
    nu: tuple[float, ...]

    @property
    def nodes(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuples, one per node."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self.edge_index

    def noise_variance(self, u: int, v: int) -> float:
        try:
            return self.nu[self.edge_index[_key(u, v)]]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def cost(self, u: int, v: int) -> float:
        """Edge length ``c_uv = 1 / nu_uv``."""
        return 1.0 / self.noise_variance(u, v)

    @property
    def is_weighted(self) -> bool:
        return any(x != 1.0 for x in self.nu)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, indices, cost)`` arrays with neighbors in increasing id order."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for i, a in enumerate(self.adjacency):
            indptr[i + 1] = indptr[i] + len(a)
        indices = np.fromiter(
            itertools.chain.from_iterable(self.adjacency), dtype=np.int64, count=2 * self.m
        )
        cost = np.empty(2 * self.m, dtype=np.float64)
        pos = 0
        for i, a in enumerate(self.adjacency):
            for j in a:
                cost[pos] = self.cost(i, j)
                pos += 1
        return indptr, indices, cost

    def rewire(
        self, remove: Edge, add: Edge, nu: float = 1.0
    ) -> "Graph":
        """Return a new graph with ``remove`` deleted and ``add`` inserted."""
        rk = _key(*remove)
        if rk not in self.edge_index:
            raise GraphError(f"cannot remove missing edge {remove}")
        kept = [(e, w) for e, w in zip(self.edges, self.nu) if e != rk]
        edges = [e for e, _ in kept] + [tuple(add)]
        weights = [w for _, w in kept] + [nu]
        return build_graph(self.n, edges, weights)

    def with_weights(self, weights: Sequence[float]) -> "Graph":
        return build_graph(self.n, self.edges, weights)


def build_graph(
    node_count: int,
    edges: Iterable[Sequence[int]],
    weights: Sequence[float] | None = None,
) -> Graph:
    """Validate an edge list and return a :class:`Graph`.

    Raises
    ------
    GraphError
        On a self-loop, duplicate edge, out-of-range endpoint, a weights
        list of the wrong length, or a non-positive noise variance.  The
        message names the offending edge.
    """
    if node_count < 0:
        raise GraphError(f"node_count must be non-negative, got {node_count}")
    edge_list = [tuple(int(x) for x in e) for e in edges]
    if weights is None:
        weight_list = [1.0] * len(edge_list)
    else:
        weight_list = [float(w) for w in weights]
        if len(weight_list) != len(edge_list):
            raise GraphError(
                f"{len(weight_list)} weights given for {len(edge_list)} edges"
            )
    pairs: dict[Edge, float] = {}
    for e, w in zip(edge_list, weight_list):
        if len(e) != 2:
            raise GraphError(f"edge {e} does not have two endpoints")
        u, v = e
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{node_count - 1}")
        if u == v:
            raise GraphError(f"self-loop at edge ({u}, {v})")
        if not (w > 0.0) or not math.isfinite(w):
            raise GraphError(f"edge ({u}, {v}) has non-positive noise variance {w}")
        k = _key(u, v)
        if k in pairs:
            raise GraphError(f"duplicate edge ({u}, {v})")
        pairs[k] = w
    ordered = sorted(pairs)
    return Graph(node_count, tuple(ordered), tuple(pairs[e] for e in ordered))


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and is_connected(g)


def require_tree(g: Graph) -> None:
    if not is_tree(g):
        raise GraphError("graph is not a tree")


def distances_from(g: Graph, source: int) -> list[float]:
    """Single-source shortest path lengths under edge cost ``1/nu`` (inf if unreachable)."""
    dist = [math.inf] * g.n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v in g.adjacency[u]:
            nd = d + g.cost(u, v)
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def graph_distance(g: Graph, i: int, j: int) -> float:
    """Shortest path length between ``i`` and ``j`` with edge length ``1/nu``."""
    if i == j:
        return 0.0
    d = distances_from(g, i)[j]
    if math.isinf(d):
        raise GraphError(f"nodes {i} and {j} are not connected")
    return d


def distance_matrix(g: Graph, metric: str = "cost") -> np.ndarray:
    """All-pairs path lengths.

    ``metric="cost"`` uses edge length ``1/nu`` (the :func:`graph_distance`
    convention); ``metric="resistance"`` uses ``nu``, which on a tree is the
    effective resistance.  Trees go through the compiled traversal kernel.
    """
    if metric not in ("cost", "resistance"):
        raise ValueError(f"unknown metric {metric!r}")
    if is_tree(g):
        indptr, indices, cost = g.csr
        lengths = cost if metric == "cost" else _csr_nu(g)
        return kernels.tree_distances(indptr, indices, lengths)
    if metric == "resistance":
        g = build_graph(g.n, g.edges, [1.0 / w for w in g.nu])
    out = np.array([distances_from(g, s) for s in range(g.n)], dtype=float)
    if np.isinf(out).any():
        raise GraphError("graph is not connected")
    return out


def _csr_nu(g: Graph) -> np.ndarray:
    return np.array(
        [g.noise_variance(i, j) for i in range(g.n) for j in g.adjacency[i]], dtype=np.float64
    )


# -- edge-list text format ----------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v [nu]``; ``#`` starts a comment line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge list")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphError(f"header must be integers, got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges but {len(body)} edge lines follow")
    edges, weights = [], []
    for ln in body:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
            weights.append(float(parts[2]) if len(parts) == 3 else 1.0)
        except ValueError:
            raise GraphError(f"bad edge line {ln!r}") from None
    return build_graph(n, edges, weights)


def read_edge_list(path: str | Path) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    return parse_edge_list(text)


def format_edge_list(g: Graph) -> str:
    rows = [f"{g.n} {g.m}"]
    for (u, v), w in zip(g.edges, g.nu):
        rows.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
    return "\n".join(rows) + "\n"


# -- families -----------------------------------------------------------------

def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Graph:
    """Hub 0 joined to leaves ``1..n-1``."""
    return build_graph(n, [(0, i) for i in range(1, n)])


def balanced_binary_tree(depth: int) -> Graph:
    n = 2 ** (depth + 1) - 1
    return build_graph(n, [((i - 1) // 2, i) for i in range(1, n)])


BROOM_HUB = 0
BROOM_HANDLE = (4, 5, 6)


def broom_graph(leaves: int = 3, handle: int = 3) -> Graph:
    """Hub 0 with ``leaves`` pendant leaves and a pendant path of ``handle`` nodes.

    The default 7-node instance is a reconstruction of the textbook example
    where the median and center differ: the hub (node 0) is the unique
    median and the first handle node (node 4) is the unique center.
    """
    edges = [(0, i) for i in range(1, leaves + 1)]
    prev = 0
    for k in range(handle):
        node = leaves + 1 + k
        edges.append((prev, node))
        prev = node
    return build_graph(1 + leaves + handle, edges)


def prufer_to_tree(seq: Sequence[int], n: int | None = None) -> Graph:
    n = len(seq) + 2 if n is None else n
    arr = np.asarray(seq, dtype=np.int64)
    return build_graph(n, kernels.prufer_decode(arr, n).tolist())


def enumerate_labeled_trees(n: int) -> Iterator[Graph]:
    """Yield each of the ``n**(n-2)`` labeled trees on ``n`` nodes once.

    Trees come from decoding every Prüfer sequence in lexicographic order.
    ``n`` is limited to ``2..9``.
    """
    if not 2 <= n <= 9:
        raise GuardError(f"enumerate_labeled_trees needs 2 <= n <= 9, got {n}")
    if n == 2:
        yield build_graph(2, [(0, 1)])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield build_graph(n, kernels.prufer_decode(np.array(seq, dtype=np.int64), n).tolist())


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform random labeled tree on ``n`` nodes."""
    if n == 1:
        return build_graph(1, [])
    if n == 2:
        return build_graph(2, [(0, 1)])
    return build_graph(n, kernels.prufer_decode(rng.integers(0, n, n - 2), n).tolist())


def random_connected_graph(
    n: int, rng: np.random.Generator, extra_edges: int | None = None
) -> Graph:
    """Random spanning tree plus ``extra_edges`` distinct chords."""
    tree = random_tree(n, rng)
    present = set(tree.edges)
    missing = [e for e in itertools.combinations(range(n), 2) if e not in present]
    if extra_edges is None:
        extra_edges = int(rng.integers(0, len(missing) + 1)) if missing else 0
    extra_edges = min(extra_edges, len(missing))
    picks = rng.choice(len(missing), size=extra_edges, replace=False) if extra_edges else []
    return build_graph(n, list(tree.edges) + [missing[k] for k in picks])


def bfs_order(g: Graph, root: int) -> tuple[list[int], list[int]]:
    """Breadth-first order and parent array (root's parent is -1)."""
    parent = [-1] * g.n
    seen = [False] * g.n
    seen[root] = True
    order = []
    q = deque([root])
    while q:
        u = q.popleft()
        order.append(u)
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                q.append(v)
    return order, parent
