"""Closed-form optima of the continuous relaxations and a KKT checker.

The uncapacitated optimum for ``k`` routes puts ``eta1 * N`` on the first
route and scales the rest by the cumulative ratio products.  The
capacitated optimum fills leading routes to capacity until the uncapacitated
optimum of what remains fits (the "peeling" rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .objective import aabrp_cost, sizes_of
from .ratios import GOLDEN, MAX_ROUTES, nu_chain

__all__ = [
    "KKTReport",
    "RealAllocation",
    "consecutive_ratio_check",
    "default_route_count",
    "kkt_residual",
    "solve_capacitated",
    "solve_uncapacitated",
    "tail_cost_lower_bound",
    "unit_cost_limit",
]

DEFAULT_RECURSION = "stationary"


@dataclass(frozen=True)
class RealAllocation:
    sizes: tuple[float, ...]
    total: float
    capacity: Optional[float] = None

    @property
    def k(self) -> int:
        return len(self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __getitem__(self, i):
        return self.sizes[i]


@dataclass(frozen=True)
class KKTReport:
    """Per-route stationarity values ``alpha_i`` of a relaxed allocation.

    ``spread`` is ``max - min`` over routes below capacity.  ``bound_excess``
    is the largest amount by which a route at capacity exceeds ``alpha``
    (the mean over free routes); a nonpositive value means every capacity
    multiplier is nonnegative.
    """

    alpha_per_route: tuple[float, ...]
    spread: float
    bound_routes: tuple[int, ...]
    alpha: Optional[float]
    bound_excess: float


def _check_total(N: float) -> float:
    N = float(N)
    if not N > 0 or not math.isfinite(N):
        raise ValueError(f"N must be a positive finite number, got {N}")
    return N


def _check_k(k: int, lo: int = 1) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError(f"k must be an integer, got {type(k).__name__}")
    if not lo <= k <= MAX_ROUTES:
        raise ValueError(f"k must lie in {lo}..{MAX_ROUTES}, got {k}")
    return int(k)


def solve_uncapacitated(N: float, k: int, recursion: str = DEFAULT_RECURSION) -> RealAllocation:
    """Relaxed optimum of ``k`` routes without capacity.

    The first (largest) route is closed by subtraction so the sizes add up
    to ``N``; trailing routes of large ``k`` are far below ``N * eps`` and
    would lose their sign if they absorbed the rounding instead.
    """
    N = _check_total(N)
    k = _check_k(k)
    if k == 1:
        return RealAllocation(sizes=(N,), total=N)
    table = nu_chain(k, recursion)
    n1 = table.eta1 * N
    rest = [r * n1 for r in reversed(table.rho_hat)]
    first = N - math.fsum(rest)
    return RealAllocation(sizes=(first, *rest), total=N)


def _first_fraction(k: int, recursion: str) -> float:
    return 1.0 if k == 1 else nu_chain(k, recursion).eta1


def solve_capacitated(
    N: float, C: float, k: int, recursion: str = DEFAULT_RECURSION
) -> RealAllocation:
    """Relaxed optimum of ``k`` routes with at most ``C`` individuals each.

    ``m`` is the smallest count of leading full routes after which the
    uncapacitated optimum of the remaining ``k - m`` routes fits under ``C``;
    equality counts as fitting.
    """
    N = _check_total(N)
    C = float(C)
    if not C > 0:
        raise ValueError(f"C must be > 0, got {C}")
    k = _check_k(k)
    if k * C < N * (1.0 - 1e-12):
        raise ValueError(f"infeasible: k*C = {k * C} < N = {N}")
    for m in range(k):
        rem = N - m * C
        if rem <= 0.0:
            return RealAllocation(sizes=(C,) * m, total=N, capacity=C)
        if _first_fraction(k - m, recursion) * rem <= C:
            tail = solve_uncapacitated(rem, k - m, recursion).sizes
            return RealAllocation(sizes=(C,) * m + tail, total=N, capacity=C)
    raise AssertionError("unreachable: k*C >= N guarantees the last route fits")


def kkt_residual(alloc, capacity: Optional[float] = None) -> KKTReport:
    """Evaluate the stationarity expression of every route.

    ``alpha_i = 1.5 sqrt(n_i) + sum_{j<i} sqrt(n_j) + sum_{j>i} n_j / (2 sqrt(n_i))``
    """
    n = np.asarray(sizes_of(alloc), dtype=float)
    if capacity is None:
        capacity = getattr(alloc, "capacity", None)
    if n.size == 0 or np.any(n <= 0):
        raise ValueError("kkt_residual needs strictly positive route sizes")
    root = np.sqrt(n)
    before = np.concatenate(([0.0], np.cumsum(root)[:-1]))
    after = np.concatenate((np.cumsum(n[::-1])[::-1][1:], [0.0]))
    alpha = 1.5 * root + before + after / (2.0 * root)

    if capacity is None:
        bound = np.zeros(n.size, dtype=bool)
    else:
        bound = n >= capacity - 1e-9 * max(1.0, capacity)
    free = alpha[~bound]
    spread = float(free.max() - free.min()) if free.size else 0.0
    alpha_hat = float(free.mean()) if free.size else None
    excess = float((alpha[bound] - alpha_hat).max()) if bound.any() and alpha_hat is not None else 0.0
    return KKTReport(
        alpha_per_route=tuple(float(a) for a in alpha),
        spread=spread,
        bound_routes=tuple(int(i) for i in np.flatnonzero(bound)),
        alpha=alpha_hat,
        bound_excess=excess,
    )


def consecutive_ratio_check(alloc) -> float:
    """Relative error of ``sqrt(n_{k-1} / n_k)`` against ``1 + phi``."""
    n = sizes_of(alloc)
    if len(n) < 2:
        raise ValueError("need at least two routes")
    if n[-1] <= 0 or n[-2] <= 0:
        raise ValueError("last two routes must be positive")
    target = 1.0 + GOLDEN.phi
    return abs(math.sqrt(n[-2] / n[-1]) - target) / target


@lru_cache(maxsize=None)
def unit_cost_limit(recursion: str = DEFAULT_RECURSION) -> tuple[float, float]:
    """``(eta, c)``: first-route fraction and relaxed cost of one unit of
    mass with as many routes as wanted (``cost(R) = c * R**1.5``)."""
    alloc = solve_uncapacitated(1.0, MAX_ROUTES, recursion)
    return nu_chain(MAX_ROUTES, recursion).eta1, aabrp_cost(alloc)


def tail_cost_lower_bound(remaining: float, cap: float) -> float:
    """Relaxed optimal cost of ``remaining`` individuals in routes of at most
    ``cap``, with unlimited route count and no prefix delay.

    Scaled down by 1e-9 relative so it stays below every integer completion.
    """
    if remaining <= 0:
        return 0.0
    eta, c = unit_cost_limit()
    root_cap = math.sqrt(cap)
    full = 0
    rem = float(remaining)
    while eta * rem > cap:
        full += 1
        rem -= cap
    cost = cap * root_cap * full * (full + 1) / 2.0 + rem * full * root_cap + c * rem**1.5
    return cost * (1.0 - 1e-9)


def default_route_count(N: float, recursion: str = DEFAULT_RECURSION) -> int:
    """Largest ``k`` up to ``ceil(log N / log(1/0.133)) + 2`` whose smallest
    relaxed route still carries at least one individual."""
    N = _check_total(N)
    k_max = 2 if N <= 1 else math.ceil(math.log(N) / math.log(1.0 / 0.133)) + 2
    k_max = min(k_max, MAX_ROUTES)
    best = 1
    for k in range(2, k_max + 1):
        if solve_uncapacitated(N, k, recursion).sizes[-1] >= 1.0:
            best = k
    return best
