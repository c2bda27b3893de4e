"""Brute-force ground truth for leader selection.

Exhaustive k-leader search over all subsets, direct 1-median / 1-center
computation on trees, and an exhaustive scan for violations of the
super-modularity inequality ``f(A) - f(A+v) >= f(B) - f(B+v)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import GraphError, GuardError
from .graph import Graph, distance_matrix, is_tree
from .variance import max_variance, steady_state_variances, total_variance

# values closer than this are ties
TIE_TOL = 1e-9


class Measure(enum.Enum):
    TotalVariance = "total"
    MaxVariance = "max"

    @classmethod
    def parse(cls, text: "str | Measure") -> "Measure":
        if isinstance(text, Measure):
            return text
        aliases = {"total": cls.TotalVariance, "terr": cls.TotalVariance,
                   "max": cls.MaxVariance, "merr": cls.MaxVariance}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown measure {text!r}; expected 'total' or 'max'") from None


def evaluate(g: Graph, leaders: Iterable[int], measure: Measure) -> float:
    """Terr or Merr of a leader set."""
    profile = steady_state_variances(g, leaders)
    if measure is Measure.TotalVariance:
        return total_variance(profile)
    return max_variance(profile)


@dataclass(frozen=True)
class LeaderSelectionResult:
    optimal_sets: list[frozenset[int]]
    optimal_value: float
    measure: Measure

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "optimal_sets": [sorted(s) for s in self.optimal_sets],
            "optimal_value": self.optimal_value,
        }


def _selection_guard(n: int, k: int, max_n: int | None) -> None:
    if not 1 <= k <= n - 1:
        raise GuardError(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    limit = max_n if max_n is not None else (20 if k <= 2 else 12)
    if n > limit:
        raise GuardError(f"exhaustive search limited to n <= {limit} for k={k}, got n={n}")


def exhaustive_leader_selection(
    g: Graph, k: int, measure: Measure | str, max_n: int | None = None
) -> LeaderSelectionResult:
    """Evaluate every ``k``-subset and return all minimizers (ties kept)."""
    measure = Measure.parse(measure)
    _selection_guard(g.n, k, max_n)
    best = math.inf
    winners: list[frozenset[int]] = []
    for U in itertools.combinations(range(g.n), k):
        val = evaluate(g, U, measure)
        if val < best - TIE_TOL:
            best = val
            winners = [frozenset(U)]
        elif abs(val - best) <= TIE_TOL:
            winners.append(frozenset(U))
    return LeaderSelectionResult(winners, best, measure)


def _argmin_set(scores: np.ndarray) -> frozenset[int]:
    lo = scores.min()
    return frozenset(int(i) for i in np.flatnonzero(scores <= lo + TIE_TOL))


def tree_medians(g: Graph, metric: str = "cost") -> frozenset[int]:
    """Nodes minimizing the sum of path lengths to all other nodes."""
    if not is_tree(g):
        raise GraphError("tree_medians requires a tree")
    return _argmin_set(distance_matrix(g, metric).sum(axis=1))


def tree_centers(g: Graph, metric: str = "cost") -> frozenset[int]:
    """Nodes minimizing eccentricity.

    ``metric="cost"`` measures edges by ``1/nu``, which is what the weighted
    center-finding protocol propagates.  ``metric="resistance"`` measures
    them by ``nu`` and matches the exhaustive max-variance optimum.
    """
    if not is_tree(g):
        raise GraphError("tree_centers requires a tree")
    return _argmin_set(distance_matrix(g, metric).max(axis=1))


@dataclass(frozen=True)
class SupermodularityWitness:
    A: frozenset[int]
    B: frozenset[int]
    v: int
    f_A: float
    f_Av: float
    f_B: float
    f_Bv: float

    @property
    def lhs(self) -> float:
        return self.f_A - self.f_Av

    @property
    def rhs(self) -> float:
        return self.f_B - self.f_Bv

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.f_A, self.f_Av, self.f_B, self.f_Bv)

    def to_dict(self) -> dict:
        return {
            "A": sorted(self.A), "B": sorted(self.B), "v": self.v,
            "f_A": self.f_A, "f_A_v": self.f_Av, "f_B": self.f_B, "f_B_v": self.f_Bv,
            "lhs": self.lhs, "rhs": self.rhs,
        }


def _subsets_by_size(items: Iterable[int], lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    items = sorted(items)
    for size in range(lo, hi + 1):
        yield from itertools.combinations(items, size)


def check_supermodularity(
    g: Graph,
    measure: Measure | str,
    *,
    A: Iterable[int] | None = None,
    B: Iterable[int] | None = None,
    max_n: int = 10,
    tol: float = 1e-12,
) -> SupermodularityWitness | None:
    """Search for ``A ⊆ B``, ``v ∉ B`` with ``f(A) - f(A+v) < f(B) - f(B+v)``.

    Triples are scanned in the order ``(|A|, A, |B|, B, v)`` with sets
    compared as sorted tuples; the first violation is returned, or ``None``
    if the measure satisfies the inequality everywhere.  ``A`` and ``B``
    pin the scan to particular sets.  Only sets with at least one leader
    and at least one follower (after adding ``v``) are considered.
    """
    measure = Measure.parse(measure)
    n = g.n
    if n > max_n:
        raise GuardError(f"supermodularity scan limited to n <= {max_n}, got n={n}")
    if n < 3:
        return None
    cache: dict[frozenset[int], float] = {}

    def f(U: frozenset[int]) -> float:
        val = cache.get(U)
        if val is None:
            val = cache[U] = evaluate(g, U, measure)
        return val

    # |B + v| <= n - 1 so |B| <= n - 2
    a_iter = [tuple(sorted(A))] if A is not None else _subsets_by_size(range(n), 1, n - 2)
    for a in a_iter:
        As = frozenset(a)
        if B is not None:
            Bs = frozenset(B)
            if not As <= Bs:
                raise ValueError("A must be a subset of B")
            b_iter: Iterable[frozenset[int]] = [Bs]
        else:
            rest = [x for x in range(n) if x not in As]
            b_iter = (
                As | frozenset(extra)
                for extra in _subsets_by_size(rest, 0, n - 2 - len(As))
            )
        for Bs in b_iter:
            for v in range(n):
                if v in Bs:
                    continue
                Av, Bv = As | {v}, Bs | {v}
                if len(Bv) == n:
                    continue
                lhs = f(As) - f(Av)
                rhs = f(Bs) - f(Bv)
                if lhs < rhs - tol:
                    return SupermodularityWitness(As, Bs, v, f(As), f(Av), f(Bs), f(Bv))
    return None
