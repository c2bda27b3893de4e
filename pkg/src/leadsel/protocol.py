"""Per-agent rules of the in-network leader selection protocols.

Every agent holds one value (an s-value for median finding, an h-value for
center finding) and one agent holds the leader flag.  A synchronous round
has two phases: all agents recompute their value from their neighbors'
previous-round values, then the leader hands its role to the neighbor with
the largest previous-round value if that value strictly exceeds its own
fresh value.  Ties among neighbors go to the largest node id, matching the
``(value, id)`` lexicographic order of the induced digraph.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .errors import GraphError, InvariantViolation
from .graph import Graph, build_graph, is_connected, is_tree, require_tree
from . import kernels
from .oracle import Measure


class Mode(enum.Enum):
    MedianLSTV = "median"
    CenterLSMV = "center"
    CenterLSMVWeightedAsWritten = "center-weighted"
    CenterLSMVWeightedCorrected = "center-weighted-corrected"

    @classmethod
    def parse(cls, text: "str | Mode") -> "Mode":
        if isinstance(text, Mode):
            return text
        for m in cls:
            if m.value == text or m.name == text:
                return m
        raise ValueError(
            f"unknown mode {text!r}; expected one of {[m.value for m in cls]}"
        )

    @property
    def measure(self) -> Measure:
        return Measure.TotalVariance if self is Mode.MedianLSTV else Measure.MaxVariance

    @property
    def weighted(self) -> bool:
        return self in (Mode.CenterLSMVWeightedAsWritten, Mode.CenterLSMVWeightedCorrected)

    @property
    def kernel_code(self) -> int:
        return _KERNEL_CODES[self]


_KERNEL_CODES = {
    Mode.MedianLSTV: kernels.MEDIAN,
    Mode.CenterLSMV: kernels.CENTER,
    Mode.CenterLSMVWeightedAsWritten: kernels.CENTER_WEIGHTED,
    Mode.CenterLSMVWeightedCorrected: kernels.CENTER_WEIGHTED_CORRECTED,
}


# -- update rules ---------------------------------------------------------------

def _drop_one_max(values: Sequence[float]) -> list[float]:
    rest = list(values)
    rest.remove(max(rest))
    return rest


def _check_degree(degree: int, k: int) -> None:
    if degree < 1:
        raise GraphError("an agent with no neighbors cannot run the update")
    if k != degree:
        raise ValueError(f"expected {degree} neighbor values, got {k}")


def update_s(degree: int, neighbor_values: Sequence[float]) -> float:
    """Median-finding update: 1 at a leaf, else 1 + sum with one maximum removed."""
    _check_degree(degree, len(neighbor_values))
    if degree == 1:
        return 1.0
    return 1.0 + float(sum(_drop_one_max(neighbor_values)))


def update_h(degree: int, neighbor_values: Sequence[float]) -> float:
    """Center-finding update: 0 at a leaf, else 1 + max with one maximum removed."""
    _check_degree(degree, len(neighbor_values))
    if degree == 1:
        return 0.0
    return 1.0 + float(max(_drop_one_max(neighbor_values)))


def update_h_weighted(
    degree: int, neighbor_pairs: Sequence[tuple[float, float]], corrected: bool = False
) -> float:
    """Weighted center update over candidates ``h_j + c_ij``.

    After one maximal candidate is removed, the as-written rule returns
    ``1 + max(rest)``; the corrected rule returns ``max(rest)``.
    """
    _check_degree(degree, len(neighbor_pairs))
    for _, c in neighbor_pairs:
        if not c > 0:
            raise ValueError(f"edge cost must be positive, got {c}")
    if degree == 1:
        return 0.0
    best = max(_drop_one_max([h + c for h, c in neighbor_pairs]))
    return float(best) if corrected else 1.0 + float(best)


def leader_transfer_decision(
    own_new_value: float, neighbor_prev_values: Mapping[int, float]
) -> int | None:
    """Neighbor to hand leadership to, or ``None`` to keep it."""
    if not neighbor_prev_values:
        raise ValueError("leader has no neighbors")
    target = max(neighbor_prev_values, key=lambda j: (neighbor_prev_values[j], j))
    if neighbor_prev_values[target] > own_new_value:
        return target
    return None


# -- network state --------------------------------------------------------------

@dataclass(frozen=True)
class AgentState:
    id: int
    value: float
    is_leader: bool = False


@dataclass(frozen=True)
class NetworkState:
    graph: Graph
    mode: Mode
    agents: tuple[AgentState, ...]
    round: int = 0

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(a.value for a in self.agents)

    @property
    def leaders(self) -> list[int]:
        return [a.id for a in self.agents if a.is_leader]

    @property
    def leader(self) -> int:
        found = self.leaders
        if len(found) != 1:
            raise InvariantViolation(f"expected exactly one leader, found {found}")
        return found[0]


def initial_state(
    g: Graph, mode: Mode | str, leader: int, values: Iterable[float] | None = None
) -> NetworkState:
    mode = Mode.parse(mode)
    vals = [0.0] * g.n if values is None else [float(v) for v in values]
    if len(vals) != g.n:
        raise ValueError(f"{len(vals)} initial values for {g.n} nodes")
    if not 0 <= leader < g.n:
        raise GraphError(f"initial leader {leader} is not a node")
    agents = tuple(AgentState(i, vals[i], i == leader) for i in range(g.n))
    return NetworkState(g, mode, agents, 0)


def _new_value(g: Graph, mode: Mode, i: int, prev: Sequence[float]) -> float:
    nbrs = g.adjacency[i]
    deg = len(nbrs)
    if mode is Mode.MedianLSTV:
        return update_s(deg, [prev[j] for j in nbrs])
    if mode is Mode.CenterLSMV:
        return update_h(deg, [prev[j] for j in nbrs])
    return update_h_weighted(
        deg,
        [(prev[j], g.cost(i, j)) for j in nbrs],
        corrected=mode is Mode.CenterLSMVWeightedCorrected,
    )


def step_round(net: NetworkState) -> NetworkState:
    """Execute one synchronous round of the protocol."""
    leader = net.leader
    g = net.graph
    if g.n == 1:
        return replace(net, round=net.round + 1)
    if not is_tree(g):
        raise GraphError("the protocol runs on connected trees only")
    prev = net.values
    new = [_new_value(g, net.mode, i, prev) for i in range(g.n)]
    target = leader_transfer_decision(
        new[leader], {j: prev[j] for j in g.adjacency[leader]}
    )
    holder = leader if target is None else target
    agents = tuple(AgentState(i, new[i], i == holder) for i in range(g.n))
    return NetworkState(g, net.mode, agents, net.round + 1)


def local_maxima(g: Graph, values: Sequence[float]) -> frozenset[int]:
    """Nodes whose value is at least every neighbor's value."""
    return frozenset(
        i for i in range(g.n) if all(values[i] >= values[j] for j in g.adjacency[i])
    )


# -- induced digraph --------------------------------------------------------------

@dataclass(frozen=True)
class InducedDigraph:
    arcs: frozenset[tuple[int, int]]

    @property
    def successor(self) -> dict[int, int]:
        return dict(self.arcs)

    def two_cycles(self) -> list[tuple[int, int]]:
        succ = self.successor
        return sorted((i, j) for i, j in succ.items() if i < j and succ.get(j) == i)

    def structure_problems(self, g: Graph, values: Sequence[float]) -> list[str]:
        """Deviations from the expected shape: one arc per node, a single
        2-cycle, connected support, and strictly increasing values toward
        the cycle along every other arc."""
        problems = []
        succ = self.successor
        if len(succ) != len(self.arcs) or set(succ) != set(range(g.n)):
            problems.append("not exactly one outgoing arc per node")
        cycles = self.two_cycles()
        if len(cycles) != 1:
            problems.append(f"expected one 2-cycle, found {cycles}")
        support = {tuple(sorted(a)) for a in self.arcs}
        if g.n > 1:
            if not is_connected(build_graph(g.n, sorted(support))):
                problems.append("support is disconnected")
        top = set(cycles[0]) if len(cycles) == 1 else set()
        for child, parent in sorted(self.arcs):
            if child in top and parent in top:
                continue
            if not values[parent] > values[child]:
                problems.append(
                    f"arc {child}->{parent} has value {values[child]} -> {values[parent]}"
                )
        return problems


def induced_digraph(g: Graph, stabilized_values: Mapping[int, float] | Sequence[float]) -> InducedDigraph:
    """Point each node at its lexicographically largest ``(value, id)`` neighbor."""
    vals = stabilized_values
    arcs = set()
    for i in range(g.n):
        nbrs = g.adjacency[i]
        if nbrs:
            arcs.add((i, max(nbrs, key=lambda j: (vals[j], j))))
    return InducedDigraph(frozenset(arcs))


def optimal_leaders(g: Graph, mode: Mode | str) -> frozenset[int]:
    """Nodes the protocol in ``mode`` is meant to reach on tree ``g``."""
    from .oracle import tree_centers, tree_medians

    require_tree(g)
    mode = Mode.parse(mode)
    if mode is Mode.MedianLSTV:
        return tree_medians(g)
    if mode is Mode.CenterLSMV:
        # the plain h-update counts hops, whatever the edge weights
        return tree_centers(build_graph(g.n, g.edges))
    return tree_centers(g)
