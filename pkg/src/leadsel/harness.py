"""Scenario execution, stabilization detection, sweeps and Monte Carlo dynamics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import GraphError, InvariantViolation, NumericalError
from .graph import (
    Graph,
    build_graph,
    distance_matrix,
    enumerate_labeled_trees,
    is_tree,
    parse_edge_list,
    read_edge_list,
)
from .oracle import exhaustive_leader_selection, tree_centers, tree_medians
from .protocol import AgentState, Mode, NetworkState, initial_state, local_maxima, optimal_leaders, step_round
from .variance import build_laplacian, steady_state_variances

WEIGHTED_TOL = 1e-12


@dataclass(frozen=True)
class TopologyChange:
    remove_edge: tuple[int, int]
    add_edge: tuple[int, int]
    nu: float = 1.0

    def apply(self, g: Graph) -> Graph:
        new = g.rewire(self.remove_edge, self.add_edge, self.nu)
        if not is_tree(new):
            raise GraphError(
                f"replacing edge {self.remove_edge} by {self.add_edge} does not leave a tree"
            )
        return new


@dataclass
class Scenario:
    graph: Graph
    mode: Mode
    initial_leader: int
    initial_values: str | Sequence[float] = "zeros"
    max_rounds: int = 100
    events: list[tuple[int, TopologyChange]] = field(default_factory=list)
    rng_seed: int = 0
    reset_on_change: bool = False

    def validate(self) -> None:
        if not 0 <= self.initial_leader < self.graph.n:
            raise GraphError(f"initial leader {self.initial_leader} is not a node")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if not is_tree(self.graph):
            raise GraphError("scenario graph must be a connected tree")
        for r, _ in self.events:
            if not 0 <= r < self.max_rounds:
                raise ValueError(f"event round {r} is outside 0..{self.max_rounds - 1}")

    def starting_values(self) -> list[float]:
        return initial_values(self.graph.n, self.initial_values, self.rng_seed)


def initial_values(n: int, policy: str | Sequence[float], seed: int = 0) -> list[float]:
    """Build initial protocol values from a policy name or an explicit list.

    Policies: ``zeros``, ``max`` (every value ``n``), ``random`` (uniform
    integers in ``[0, n]`` drawn from ``seed``).
    """
    if isinstance(policy, str):
        if policy == "zeros":
            return [0.0] * n
        if policy == "max":
            return [float(n)] * n
        if policy == "random":
            rng = np.random.default_rng(seed)
            return [float(x) for x in rng.integers(0, n + 1, n)]
        raise ValueError(f"unknown initial value policy {policy!r}")
    vals = [float(x) for x in policy]
    if len(vals) != n:
        raise ValueError(f"{len(vals)} initial values for {n} nodes")
    return vals


@dataclass
class RunReport:
    rounds_executed: int
    initial_leader: int
    leader_trajectory: list[int]
    final_values: list[float]
    final_leader: int
    optimal_set: list[int]
    stabilization_round: int | None
    leader_optimal_round: int | None
    invariant_violations: list[str]
    value_history: list[list[float]] = field(repr=False, default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.invariant_violations

    def to_dict(self, include_history: bool = False) -> dict[str, Any]:
        d = {
            "rounds_executed": self.rounds_executed,
            "initial_leader": self.initial_leader,
            "leader_trajectory": self.leader_trajectory,
            "final_leader": self.final_leader,
            "final_values": self.final_values,
            "optimal_set": self.optimal_set,
            "stabilization_round": self.stabilization_round,
            "leader_optimal_round": self.leader_optimal_round,
            "invariant_violations": self.invariant_violations,
        }
        if include_history:
            d["value_history"] = self.value_history
        return d

    def trace_csv(self) -> str:
        n = len(self.final_values)
        rows = ["round,leader," + ",".join(f"v{i}" for i in range(n))]
        leaders = [self.initial_leader] + self.leader_trajectory
        for t, (lead, vals) in enumerate(zip(leaders, self.value_history)):
            rows.append(f"{t},{lead}," + ",".join(_fmt(v) for v in vals))
        return "\n".join(rows) + "\n"


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def detect_stabilization(
    history: Sequence[Sequence[float]], quiescent_from: int = 0, tol: float = 0.0
) -> int | None:
    """Smallest ``T >= quiescent_from`` with ``history[T] == history[T + 1]``.

    Comparison is exact when ``tol`` is 0 and element-wise within ``tol``
    otherwise.  Returns ``None`` if no such ``T`` exists in the history.
    """
    for t in range(max(quiescent_from, 0), len(history) - 1):
        a, b = history[t], history[t + 1]
        if tol == 0.0:
            same = list(a) == list(b)
        else:
            same = all(abs(x - y) <= tol for x, y in zip(a, b))
        if same:
            return t
    return None


def first_settled_round(leaders: Sequence[int], optimal: Iterable[int], start: int = 0) -> int | None:
    """First round ``t >= start`` after which every leader entry is optimal."""
    opt = set(optimal)
    settled = None
    for t in range(len(leaders) - 1, start - 1, -1):
        if leaders[t] in opt:
            settled = t
        else:
            break
    return settled


def run(sc: Scenario) -> RunReport:
    """Execute a scenario round by round through :func:`step_round`."""
    sc.validate()
    mode = sc.mode
    values0 = sc.starting_values()
    state: NetworkState = initial_state(sc.graph, mode, sc.initial_leader, values0)
    integral = not mode.weighted and all(v.is_integer() for v in values0)
    events: dict[int, list[TopologyChange]] = {}
    for r, ch in sorted(sc.events, key=lambda e: e[0]):
        events.setdefault(r, []).append(ch)
    quiescent_from = max(events) if events else 0

    history = [list(state.values)]
    leaders = [sc.initial_leader]
    violations: list[str] = []
    for t in range(sc.max_rounds):
        for ch in events.get(t, ()):
            g = ch.apply(state.graph)
            agents = tuple(
                AgentState(a.id, 0.0 if sc.reset_on_change else a.value, a.is_leader)
                for a in state.agents
            )
            state = NetworkState(g, mode, agents, state.round)
        state = step_round(state)
        flags = state.leaders
        if len(flags) != 1:
            violations.append(f"round {t + 1}: {len(flags)} leaders {flags}")
            break
        vals = list(state.values)
        if integral and not all(v.is_integer() for v in vals):
            violations.append(f"round {t + 1}: non-integral values {vals}")
            break
        history.append(vals)
        leaders.append(flags[0])

    g = state.graph
    optimal = optimal_leaders(g, mode)
    tol = WEIGHTED_TOL if mode.weighted else 0.0
    stab = detect_stabilization(history, quiescent_from, tol)
    settled = first_settled_round(leaders, optimal, quiescent_from)
    return RunReport(
        rounds_executed=len(history) - 1,
        initial_leader=sc.initial_leader,
        leader_trajectory=leaders[1:],
        final_values=history[-1],
        final_leader=leaders[-1],
        optimal_set=sorted(optimal),
        stabilization_round=stab,
        leader_optimal_round=settled,
        invariant_violations=violations,
        value_history=history,
    )


# -- scenario files -------------------------------------------------------------

def _graph_from_json(entry: Any, base: Path) -> Graph:
    if isinstance(entry, str):
        path = Path(entry)
        return read_edge_list(path if path.is_absolute() else base / path)
    if isinstance(entry, dict):
        if "file" in entry:
            return _graph_from_json(entry["file"], base)
        if "edge_list" in entry:
            return parse_edge_list(entry["edge_list"])
        edges = entry.get("edges", [])
        weights = entry.get("weights")
        return build_graph(int(entry["n"]), [tuple(e[:2]) for e in edges],
                           weights if weights is not None else [e[2] if len(e) > 2 else 1.0 for e in edges])
    raise GraphError(f"cannot interpret graph entry {entry!r}")


def scenario_from_dict(d: dict, base: str | Path = ".") -> Scenario:
    try:
        g = _graph_from_json(d["graph"], Path(base))
        events = []
        for ev in d.get("events", []):
            add = ev["add_edge"]
            nu = float(add[2]) if len(add) > 2 else float(ev.get("nu", 1.0))
            events.append((int(ev["round"]), TopologyChange(
                tuple(ev["remove_edge"]), (int(add[0]), int(add[1])), nu)))
        return Scenario(
            graph=g,
            mode=Mode.parse(d.get("mode", "median")),
            initial_leader=int(d["initial_leader"]),
            initial_values=d.get("initial_values", "zeros"),
            max_rounds=int(d.get("max_rounds", 100)),
            events=events,
            rng_seed=int(d.get("seed", 0)),
            reset_on_change=bool(d.get("reset_on_change", False)),
        )
    except KeyError as exc:
        raise GraphError(f"scenario is missing field {exc}") from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_dict(data, path.parent)


def scenario_to_dict(sc: Scenario) -> dict:
    g = sc.graph
    return {
        "graph": {"n": g.n, "edges": [list(e) for e in g.edges], "weights": list(g.nu)},
        "mode": sc.mode.value,
        "initial_leader": sc.initial_leader,
        "initial_values": sc.initial_values if isinstance(sc.initial_values, str) else list(sc.initial_values),
        "max_rounds": sc.max_rounds,
        "events": [
            {"round": r, "remove_edge": list(ch.remove_edge), "add_edge": [*ch.add_edge, ch.nu]}
            for r, ch in sc.events
        ],
        "seed": sc.rng_seed,
        "reset_on_change": sc.reset_on_change,
    }


# -- fast kernel-driven checks ----------------------------------------------------

@dataclass(frozen=True)
class KernelRun:
    final_values: np.ndarray
    leaders: np.ndarray
    stabilization_round: int | None


def kernel_run(g: Graph, mode: Mode, leader: int, values: Sequence[float], rounds: int) -> KernelRun:
    """Run ``rounds`` rounds in the compiled kernel and locate stabilization."""
    indptr, indices, cost = g.csr
    tol = WEIGHTED_TOL if mode.weighted else 0.0
    final, leaders, changed = kernels.run_rounds(
        indptr, indices, cost, np.asarray(values, dtype=np.float64), leader,
        mode.kernel_code, rounds, tol,
    )
    still = np.flatnonzero(changed == 0)
    stab = int(still[0]) if len(still) else None
    return KernelRun(final, leaders, stab)


def default_round_budget(n: int) -> int:
    return 4 * n + 10


def enum_check(
    n: int,
    mode: Mode | str,
    inits: Sequence[str] = ("zeros", "max", "random"),
    seed: int = 0,
    leader: int = 0,
    compare_exhaustive: bool = True,
) -> dict:
    """Verify the protocol against the oracles on every labeled tree with ``n`` nodes.

    For each tree and initialization the stabilized local-maximum set must
    equal the medians (centers), the final leader must lie in it, and with
    ``compare_exhaustive`` the set must also equal the exhaustive
    single-leader optimum of the matching variance measure.
    """
    mode = Mode.parse(mode)
    if mode.weighted:
        raise ValueError("enum_check runs the unweighted protocols")
    rng = np.random.default_rng(seed)
    budget = default_round_budget(n)
    trees = 0
    failures: list[dict] = []
    for g in enumerate_labeled_trees(n):
        trees += 1
        target = tree_medians(g) if mode is Mode.MedianLSTV else tree_centers(g)
        if compare_exhaustive:
            best = exhaustive_leader_selection(g, 1, mode.measure)
            exhaustive = frozenset().union(*best.optimal_sets)
            if exhaustive != target:
                failures.append({"edges": g.edges, "reason": "oracle mismatch",
                                 "exhaustive": sorted(exhaustive), "tree": sorted(target)})
        for policy in inits:
            vals = initial_values(n, policy, int(rng.integers(2**63))) if policy == "random" \
                else initial_values(n, policy)
            res = kernel_run(g, mode, leader, vals, budget)
            argmax = local_maxima(g, res.final_values)
            if res.stabilization_round is None or argmax != target or int(res.leaders[-1]) not in target:
                failures.append({"edges": g.edges, "init": policy, "reason": "protocol mismatch",
                                 "argmax": sorted(argmax), "expected": sorted(target),
                                 "stabilized": res.stabilization_round})
    return {"n": n, "mode": mode.value, "trees": trees, "inits": list(inits),
            "failures": failures, "ok": not failures}


# -- convergence sweep --------------------------------------------------------------

def leaf_to_median_depth(g: Graph) -> int:
    """Largest hop distance from a leaf to the nearest median."""
    hops = distance_matrix(build_graph(g.n, g.edges))
    med = sorted(tree_medians(g))
    leaves = [i for i in range(g.n) if g.degree(i) <= 1]
    return int(max(hops[i, med].min() for i in leaves))


def radius(g: Graph) -> int:
    return int(distance_matrix(build_graph(g.n, g.edges)).max(axis=1).min())


def farthest_from_optimum(g: Graph, optimal: Iterable[int]) -> int:
    hops = distance_matrix(build_graph(g.n, g.edges))
    opt = sorted(optimal)
    gap = hops[:, opt].min(axis=1)
    return int(np.argmax(gap))


@dataclass(frozen=True)
class SweepRow:
    tree: int
    n: int
    depth: int
    repetition: int
    initial_leader: int
    stabilization_round: int | None
    rounds_to_optimal: int | None


def convergence_sweep(
    trees: Iterable[Graph],
    mode: Mode | str,
    repetitions: int = 1,
    seed: int = 0,
    init: str = "zeros",
    leader: str = "far",
) -> list[SweepRow]:
    """Rounds until the leader settles on an optimum, paired with ``d`` or ``r``.

    ``depth`` is the leaf-to-median depth for the median protocol and the
    radius for the center protocols.  ``leader="far"`` starts at the node
    farthest from the optimal set; ``leader="random"`` draws it.
    """
    mode = Mode.parse(mode)
    rng = np.random.default_rng(seed)
    rows = []
    for ti, g in enumerate(trees):
        depth = leaf_to_median_depth(g) if mode is Mode.MedianLSTV else radius(g)
        optimal = optimal_leaders(g, mode)
        for rep in range(repetitions):
            start = farthest_from_optimum(g, optimal) if leader == "far" else int(rng.integers(g.n))
            sc = Scenario(g, mode, start, init if init != "random" else "random",
                          max_rounds=default_round_budget(g.n), rng_seed=int(rng.integers(2**63)))
            rep_ = run(sc)
            if rep_.invariant_violations:
                raise InvariantViolation("; ".join(rep_.invariant_violations))
            rows.append(SweepRow(ti, g.n, depth, rep, start, rep_.stabilization_round,
                                 rep_.leader_optimal_round))
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    out = ["tree,n,depth,repetition,initial_leader,stabilization_round,rounds_to_optimal"]
    for r in rows:
        out.append(",".join("" if x is None else str(x) for x in (
            r.tree, r.n, r.depth, r.repetition, r.initial_leader,
            r.stabilization_round, r.rounds_to_optimal)))
    return "\n".join(out) + "\n"


# -- Monte Carlo dynamics ----------------------------------------------------------

@dataclass(frozen=True)
class DynamicsEstimate:
    per_follower_empirical_variance: dict[int, float]
    standard_errors: dict[int, float]
    trials: int
    dt: float
    horizon: float
    burn_in: float


def simulate_dynamics(
    g: Graph,
    leaders: Iterable[int],
    dt: float = 0.01,
    horizon: float = 200.0,
    burn_in: float = 50.0,
    trials: int = 64,
    seed: int = 0,
    noise_scale: float = 1.0,
    chunk: int = 1000,
) -> DynamicsEstimate:
    """Euler-Maruyama estimate of follower steady-state variances.

    Integrates ``dx = -L_ff x dt + noise_scale dW`` with leaders pinned at
    the reference 0.  Each trial draws from its own stream seeded by
    ``(seed, trial)``; a trial's estimate is the time average of ``x_i**2``
    after ``burn_in`` and the standard error is taken across trials.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not 0 < burn_in < horizon:
        raise ValueError("need 0 < burn_in < horizon")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dec = build_laplacian(g, leaders)
    f = len(dec.follower_order)
    A = np.eye(f) - dt * dec.L_ff
    steps = int(round(horizon / dt))
    burn = int(round(burn_in / dt))
    streams = [np.random.default_rng([seed, k]) for k in range(trials)]
    x = np.zeros((trials, f))
    acc = np.zeros((trials, f))
    sd = noise_scale * math.sqrt(dt)
    done = 0
    while done < steps:
        m = min(chunk, steps - done)
        noise = np.stack([s.standard_normal((m, f)) for s in streams], axis=1) * sd
        for k in range(m):
            x = x @ A + noise[k]
            if done + k >= burn:
                acc += x * x
        if not np.isfinite(x).all() or np.abs(x).max() > 1e8:
            raise NumericalError(f"integration diverged at dt={dt}; use a smaller dt")
        done += m
    per_trial = acc / (steps - burn)
    mean = per_trial.mean(axis=0)
    se = per_trial.std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros(f)
    order = dec.follower_order
    return DynamicsEstimate(
        {i: float(mean[k]) for k, i in enumerate(order)},
        {i: float(se[k]) for k, i in enumerate(order)},
        trials, dt, horizon, burn_in,
    )


def compare_dynamics(g: Graph, leaders: Iterable[int], est: DynamicsEstimate,
                     rel: float = 0.05, n_se: float = 3.0) -> dict[int, dict[str, float]]:
    """Analytic vs empirical variance per follower with the acceptance band."""
    analytic = steady_state_variances(g, leaders).per_follower
    out = {}
    for i, a in analytic.items():
        e = est.per_follower_empirical_variance[i]
        se = est.standard_errors[i]
        band = max(n_se * se, rel * a)
        out[i] = {"analytic": a, "empirical": e, "se": se, "band": band,
                  "ok": abs(e - a) <= band}
    return out
