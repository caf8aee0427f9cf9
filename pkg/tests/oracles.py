"""Reference implementations that share no code with the package.

Costs use the form ``sum_j sqrt(n_j) * R_j`` where ``R_j`` is the number of
individuals not yet served when route ``j`` starts; it equals the prefix-sum
form used by the library but is evaluated differently.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def remaining_form_cost(sizes) -> float:
    R = sum(sizes)
    total = 0.0
    for n in sizes:
        total += math.sqrt(n) * R
        R -= n
    return total


def integer_optimum(N: int, C: int | None = None) -> tuple[float, tuple[int, ...]]:
    return integer_optimum_table(N, C)[N]


def integer_optimum_table(N: int, C: int | None = None) -> list[tuple[float, tuple[int, ...]]]:
    """Optimum for every population ``0..N``.

    Minimum over all compositions with parts at most ``C`` by
    dynamic programming on the number still waiting.

    The suffix cost of a composition depends only on how many are left, so
    ``f(R) = min_p sqrt(p) R + f(R - p)`` is exact.  Ties go to fewer routes,
    then to the lexicographically larger sequence.
    """
    cap = N if C is None else min(C, N)
    best = [(0.0, ())]
    for R in range(1, N + 1):
        cands = []
        for p in range(1, min(cap, R) + 1):
            c, tail = best[R - p]
            cands.append((c + math.sqrt(p) * R, (p,) + tail))
        lo = min(c for c, _ in cands)
        ties = [s for c, s in cands if c <= lo + 1e-12]
        best.append((lo, min(ties, key=lambda s: (len(s), [-x for x in s]))))
    return best


_BASE = 21


@lru_cache(maxsize=None)
def _suffix_table(R: int) -> tuple[np.ndarray, np.ndarray]:
    """Costs and largest part of every composition of ``R``, in the order
    ``first part 1, first part 2, ...`` recursively."""
    if R == 0:
        return np.zeros(1), np.zeros(1, dtype=np.int16)
    costs, tops = [], []
    for p in range(1, R + 1):
        c, t = _suffix_table(R - p)
        costs.append(c + math.sqrt(p) * R)
        tops.append(np.maximum(t, p))
    return np.concatenate(costs), np.concatenate(tops).astype(np.int16)


def _decode(R: int, idx: int) -> list[int]:
    out = []
    while R:
        for p in range(1, R + 1):
            block = 1 if R == p else 1 << (R - p - 1)
            if idx < block:
                out.append(p)
                R -= p
                break
            idx -= block
    return out


def exhaustive_minimizers(N: int, C: int | None = None, tol: float = 1e-9):
    """Every composition of ``N`` is costed; returns the minimum and all
    compositions within ``tol`` of it.

    Compositions are enumerated as a prefix (walked explicitly) followed by a
    tabulated suffix of at most ``_BASE`` individuals.
    """
    cap = N if C is None else C
    best = math.inf
    hits: list[tuple[float, list[int]]] = []

    def visit(prefix, R, acc):
        nonlocal best
        if R <= _BASE:
            costs, tops = _suffix_table(R)
            vals = np.where(tops <= cap, costs + acc, np.inf)
            lo = float(vals.min())
            if lo <= best + tol:
                best = min(best, lo)
                for i in np.flatnonzero(vals <= best + tol):
                    hits.append((float(vals[i]), prefix + _decode(R, int(i))))
            return
        for p in range(1, min(cap, R) + 1):
            visit(prefix + [p], R - p, acc + math.sqrt(p) * R)

    visit([], N, 0.0)
    minimizers = [s for c, s in hits if c <= best + tol]
    return best, minimizers


def all_compositions(N: int):
    for cuts in itertools.product((0, 1), repeat=N - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield parts


def unit_mass_cost_fixed_point(iters: int = 200) -> tuple[float, float]:
    """``c = min_x sqrt(x) + c (1 - x)**1.5`` for one unit of mass spread over
    unboundedly many routes; returns ``(c, argmin x)``.
    """
    from scipy.optimize import minimize_scalar

    c, x = 1.0, 1.0
    for _ in range(iters):
        res = minimize_scalar(lambda t: math.sqrt(t) + c * (1 - t) ** 1.5,
                              bounds=(1e-9, 1.0), method="bounded",
                              options={"xatol": 1e-14})
        if abs(res.fun - c) < 1e-15:
            break
        c, x = res.fun, res.x
    return c, x


def closed_tour_length(points: np.ndarray, seq) -> float:
    return float(sum(np.hypot(*(points[a] - points[b])) for a, b in zip(seq, seq[1:])))


def exhaustive_tour(points: np.ndarray) -> float:
    """Shortest closed tour from point 0 over all others, every permutation."""
    rest = range(1, len(points))
    return min(closed_tour_length(points, (0, *perm, 0)) for perm in itertools.permutations(rest))
