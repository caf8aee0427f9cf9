"""Timing of the compiled kernels against the pure-Python fallback."""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .allocation import _lower_bound_table, aabrp_cost, gr_heuristic
from .routing import _nearest_neighbor, generate_instance


def _best_time(fn, repeat: int) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _cases():
    for N, C in ((200, 200), (200, 16)):
        start = gr_heuristic(N, None if C == N else C)
        lb = _lower_bound_table(N, C)
        yield (
            "partition_search",
            f"N={N} C={C}",
            lambda mod, N=N, C=C, lb=lb, start=start: mod.partition_search(
                N, C, lb, aabrp_cost(start), list(start.sizes), 10**8
            )[:2],
        )
    for m in (9, 12):
        dist = generate_instance(m, seed=1).distances()
        yield "held_karp", f"m={m}", lambda mod, dist=dist: mod.held_karp(dist)[1]
    for n in (100, 200):
        dist = generate_instance(n, seed=2).distances()
        order = _nearest_neighbor(dist)
        yield "two_opt", f"n={n}", lambda mod, dist=dist, order=order: mod.two_opt(order, dist)[0]
        yield "or_opt", f"n={n}", lambda mod, dist=dist, order=order: mod.or_opt(order, dist)[0]


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.shape == b.shape and np.array_equal(a, b)
    return a == b


def run(repeat: int = 3) -> list[dict]:
    """One row per kernel case with both timings and an agreement flag.

    Without the extension only the Python column is filled.
    """
    backends = kernels.backends()
    rows = []
    for name, size, fn in _cases():
        py_t, py_out = _best_time(lambda: fn(backends["python"]), repeat)
        row = {"kernel": name, "size": size, "python_s": py_t, "compiled_s": None,
               "speedup": None, "identical": None}
        if "compiled" in backends:
            c_t, c_out = _best_time(lambda: fn(backends["compiled"]), repeat)
            row.update(compiled_s=c_t, speedup=py_t / c_t if c_t > 0 else None,
                       identical=_same(py_out, c_out))
        rows.append(row)
    return rows
