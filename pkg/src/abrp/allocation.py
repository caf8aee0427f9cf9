"""Integer allocations: the golden-ratio heuristic and an exact search.

The exact search walks non-increasing partitions of ``N`` (an optimal
allocation is always non-increasing) depth first, largest part first, with
the heuristic as the first incumbent.  A partial allocation is pruned when
its cost so far, plus the delay it imposes on everyone still waiting, plus a
relaxed lower bound on serving them, cannot beat the incumbent.
"""

from __future__ import annotations

import operator
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import kernels
from .objective import SatisfactionParams, aabrp_cost, completion_times, satisfaction
from .relaxation import tail_cost_lower_bound

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "GR_ETA",
    "ExactResult",
    "GapReport",
    "IntAllocation",
    "SatisfactionParams",
    "SearchBudgetExceeded",
    "aabrp_cost",
    "completion_times",
    "exact_integer",
    "exact_search",
    "gap_report",
    "gr_heuristic",
    "satisfaction",
]

GR_ETA = Fraction(867, 1000)
DEFAULT_NODE_BUDGET = 10**8
MAX_EXACT_N = 200


class SearchBudgetExceeded(RuntimeError):
    """The exact search used up its node budget before proving optimality."""

    def __init__(self, nodes: int, incumbent: "IntAllocation"):
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes
        self.incumbent = incumbent


@dataclass(frozen=True)
class IntAllocation:
    sizes: tuple[int, ...]
    capacity: Optional[int] = None

    def __post_init__(self):
        sizes = tuple(map(int, self.sizes))
        if sizes and min(sizes) < 1:
            raise ValueError(f"route sizes must be positive integers, got {sizes}")
        if not all(map(operator.ge, sizes, sizes[1:])):
            raise ValueError(f"route sizes must be non-increasing, got {sizes}")
        if self.capacity is not None and sizes and max(sizes) > self.capacity:
            raise ValueError(f"route size above capacity {self.capacity}: {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __getitem__(self, i):
        return self.sizes[i]


def _as_fraction(eta) -> Fraction:
    if isinstance(eta, Fraction):
        return eta
    if isinstance(eta, float):
        return Fraction(repr(eta))
    return Fraction(eta)


def _check_count(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def gr_heuristic(N: int, C: Optional[int] = None, eta: Union[Fraction, float, str] = GR_ETA) -> IntAllocation:
    """Serve ``ceil(min(C, eta * remaining))`` on each route until nobody is left.

    ``eta`` is kept as an exact fraction so the ceiling never sees rounding
    noise.  Leading full-capacity routes are counted in one step; the result
    is identical to the route-by-route loop.
    """
    N = _check_count("N", N)
    if C is not None:
        C = _check_count("C", C)
    eta = _as_fraction(eta)
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    p, q = eta.numerator, eta.denominator
    sizes: list[int] = []
    rem = N
    while rem > 0:
        if C is not None and p * rem >= C * q:
            # eta * (rem - j C) >= C  <=>  j <= (p rem - q C) / (p C)
            full = (p * rem - q * C) // (p * C) + 1
            sizes.extend([C] * full)
            rem -= full * C
            continue
        n = -(-p * rem // q)
        sizes.append(n)
        rem -= n
    return IntAllocation(tuple(sizes), C)


def node_budget_from_env() -> int:
    raw = os.environ.get("ABRP_NODE_BUDGET")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError(f"ABRP_NODE_BUDGET must be positive, got {raw}")
    return value


@lru_cache(maxsize=64)
def _lower_bound_table(N: int, cap: int) -> np.ndarray:
    table = np.zeros((N + 1, cap + 1))
    for r in range(1, N + 1):
        for m in range(1, cap + 1):
            table[r, m] = tail_cost_lower_bound(r, m)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class ExactResult:
    alloc: IntAllocation
    cost: float
    nodes: int
    implementation: str


def exact_search(
    N: int,
    C: Optional[int] = None,
    node_budget: Optional[int] = None,
    backend=None,
) -> ExactResult:
    """Minimum-cost integer allocation with search statistics.

    Ties within 1e-12 go to fewer routes, then to the lexicographically
    largest sequence.
    """
    N = _check_count("N", N)
    if N > MAX_EXACT_N:
        raise ValueError(f"exact search is limited to N <= {MAX_EXACT_N}, got {N}")
    if C is not None:
        C = _check_count("C", C)
    budget = node_budget_from_env() if node_budget is None else _check_count("node_budget", node_budget)
    backend = kernels if backend is None else backend
    cap = N if C is None else min(C, N)

    start = gr_heuristic(N, C)
    cost, parts, nodes, complete = backend.partition_search(
        N, cap, _lower_bound_table(N, cap), aabrp_cost(start), list(start.sizes), budget
    )
    alloc = IntAllocation(tuple(parts), C)
    if not complete:
        raise SearchBudgetExceeded(nodes, alloc)
    return ExactResult(alloc=alloc, cost=aabrp_cost(alloc), nodes=nodes, implementation=backend.IMPLEMENTATION)


def exact_integer(N: int, C: Optional[int] = None, node_budget: Optional[int] = None) -> IntAllocation:
    """Minimum-cost integer allocation of ``N`` individuals, parts at most ``C``."""
    return exact_search(N, C, node_budget).alloc


@dataclass(frozen=True)
class GapReport:
    gr_z: float
    exact_z: float
    rel_gap: float
    gr_alloc: IntAllocation
    exact_alloc: IntAllocation

    @property
    def identical(self) -> bool:
        return self.gr_alloc.sizes == self.exact_alloc.sizes


def gap_report(N: int, C: Optional[int] = None, params: SatisfactionParams = SatisfactionParams()) -> GapReport:
    """Objective gap of the heuristic relative to the exact optimum."""
    heur = gr_heuristic(N, C)
    best = exact_integer(N, C)
    gr_z = satisfaction(heur, params)
    exact_z = satisfaction(best, params)
    return GapReport(
        gr_z=gr_z,
        exact_z=exact_z,
        rel_gap=(exact_z - gr_z) / exact_z,
        gr_alloc=heur,
        exact_alloc=best,
    )
