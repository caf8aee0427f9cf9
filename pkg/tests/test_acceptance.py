"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line that is printed in the pytest
terminal summary (and directly when this file is run as a script).
Expected numbers are reference values typed in by hand.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from abrp import ratios
from abrp.allocation import exact_integer, gap_report, gr_heuristic
from abrp.objective import SatisfactionParams, aabrp_cost, satisfaction
from abrp.ratios import GOLDEN, eta1, eta1_decimal, eta1_limit, nu_chain
from abrp.relaxation import consecutive_ratio_check, kkt_residual, solve_uncapacitated
from abrp.routing import brute_force_abrp, generate_instance

from oracles import exhaustive_minimizers

RATIO_TABLE = {
    2: ("0.872678", "0.145898", None),
    3: ("0.866352", "0.134624", "0.145898"),
    4: ("0.866758", "0.133180", "0.134624"),
    5: ("0.866977", "0.132989", "0.133180"),
    6: ("0.867029", "0.132964", "0.132989"),
    7: ("0.867038", "0.132960", "0.132964"),
    8: ("0.867040", "0.132960", "0.132960"),
    9: ("0.867040", "0.132960", "0.132960"),
    10: ("0.867040", "0.132960", "0.132960"),
}

# (C, N): (exact z, heuristic z)
COMPARISON = {
    (16, 20): ("19.1207", "19.1200"),
    (16, 40): ("37.2183", "37.2183"),
    (16, 100): ("85.5207", "85.5200"),
    (18, 20): ("19.1234", "19.1232"),
    (18, 40): ("37.2903", "37.2896"),
    (18, 100): ("86.1135", "86.1135"),
    (20, 20): ("19.1234", "19.1232"),
    (20, 40): ("37.3346", "37.3343"),
    (20, 100): ("86.6014", "86.6012"),
    (None, 20): ("19.1234", "19.1232"),
    (None, 40): ("37.5236", "37.5218"),
    (None, 100): ("90.2132", "90.2123"),
}

PARAMS = SatisfactionParams(a=1.0, b=0.01, kappa=1.0)


def _best_time(fn, repeat=5):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _record(log, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    log.append(line)
    print(line)
    assert ok, line


def _ratio_rows():
    rows = {}
    for k in range(2, 11):
        t = nu_chain(k)
        inv2 = f"{1 / t.nu_at(2):.6f}" if k > 2 else None
        rows[k] = (f"{t.eta1:.6f}", f"{1 / t.nu_at(1):.6f}", inv2)
    return rows


def test_ratio_table(acceptance_log):
    ratios._tail_chain.cache_clear()
    elapsed, rows = _best_time(_ratio_rows)
    wrong = {k: (rows[k], RATIO_TABLE[k]) for k in RATIO_TABLE if rows[k] != RATIO_TABLE[k]}
    ok = not wrong and elapsed < 1e-3
    _record(acceptance_log, "ratio table k=2..10 at 6 decimals", ok,
            f"mismatches={wrong or 0}, {elapsed * 1e3:.3f} ms")


def test_first_route_limit(acceptance_log):
    elapsed, value = _best_time(lambda: eta1_limit(1e-6))
    ok = abs(value - 0.867040) <= 5e-7 and 0.854 < value < 1.0 and elapsed < 1e-3
    _record(acceptance_log, "first-route fraction limit", ok,
            f"eta1_limit(1e-6) = {value:.9f}, {elapsed * 1e3:.3f} ms")


def _monotone():
    e = {k: eta1_decimal(k) for k in range(2, 42)}
    rising = all(e[k + 1] > e[k] for k in range(3, 41))
    return rising and e[3] < e[2], min(e[k + 1] - e[k] for k in range(3, 41))


def test_first_route_fraction_monotone(acceptance_log):
    # Steps shrink like 0.133**k and vanish in double precision past k ~ 20,
    # so the ordering is checked with 50-digit arithmetic.
    elapsed, (ok, smallest) = _best_time(_monotone)
    float_dip = eta1(3) < eta1(2)
    ok = ok and float_dip and elapsed < 1e-3
    _record(acceptance_log, "eta1 increasing for 3<=k<=40, eta1(3) < eta1(2)", ok,
            f"smallest step {float(smallest):.3e}, {elapsed * 1e3:.3f} ms")


def test_comparison_table(acceptance_log):
    t0 = time.perf_counter()
    bad = []
    slowest_gr = 0.0
    for (C, N), (want_exact, want_gr) in COMPARISON.items():
        z_exact = f"{satisfaction(exact_integer(N, C), PARAMS):.4f}"
        gr_t, heur = _best_time(lambda: gr_heuristic(N, C), repeat=3)
        slowest_gr = max(slowest_gr, gr_t)
        z_gr = f"{satisfaction(heur, PARAMS):.4f}"
        if (z_exact, z_gr) != (want_exact, want_gr):
            bad.append(((C, N), z_exact, z_gr))
    total = time.perf_counter() - t0
    ok = not bad and total < 60 and slowest_gr < 1e-3
    _record(acceptance_log, "12-cell exact vs heuristic objective table", ok,
            f"mismatches={bad or 0}, total {total:.2f} s, slowest heuristic call {slowest_gr * 1e3:.3f} ms")


def test_instance_grid(acceptance_log):
    reports = [gap_report(N, C, PARAMS) for C in (16, 18, 20, None) for N in range(10, 101, 2)]
    mean_gap = sum(r.rel_gap for r in reports) / len(reports)
    same = sum(r.identical for r in reports)
    ok = len(reports) == 184 and mean_gap < 2e-4 and same >= 70 and min(r.rel_gap for r in reports) >= -1e-12
    _record(acceptance_log, "184-instance grid", ok,
            f"mean gap {mean_gap * 100:.5f}%, identical {same}/184")


def test_kkt_stationarity(acceptance_log):
    worst_spread, worst_ratio = 0.0, 0.0
    for N in (10, 100, 1000):
        for k in range(2, 11):
            alloc = solve_uncapacitated(N, k)
            worst_spread = max(worst_spread, kkt_residual(alloc).spread / math.sqrt(N))
            worst_ratio = max(worst_ratio, consecutive_ratio_check(alloc))
    ok = worst_spread < 1e-6 and worst_ratio < 1e-9
    _record(acceptance_log, "KKT stationarity of the relaxed optimum", ok,
            f"max spread/sqrt(N) {worst_spread:.2e}, max tail-ratio error {worst_ratio:.2e}")


def test_nonincreasing_optimum_oracle(acceptance_log):
    t0 = time.perf_counter()
    bad = []
    for C in (None, 5, 10):
        for N in range(1, 31):
            best, minimizers = exhaustive_minimizers(N, C)
            found = exact_integer(N, C)
            in_set = list(found.sizes) in minimizers
            monotone = any(all(a >= b for a, b in zip(s, s[1:])) for s in minimizers)
            if not (in_set and monotone and abs(aabrp_cost(found) - best) <= 1e-12 * best):
                bad.append((N, C))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    _record(acceptance_log, "exact search vs exhaustive compositions, N<=30", ok,
            f"failures={bad or 0}, {elapsed:.1f} s")


def _dominated_pairs(plan):
    sizes, t = plan.sizes, plan.tour_durations
    return [(k, h) for k in range(len(sizes)) for h in range(k + 1, len(sizes))
            if sizes[k] <= sizes[h] and t[k] > t[h] + 1e-9]


def test_route_order_dominance(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240514)
    count, bad = 0, []
    for N in (4, 5, 6, 7):
        for _ in range(60):
            seed = int(rng.integers(2**63))
            cap = (None, 2, 3, N - 1)[count % 4]
            inst = generate_instance(N, area=rng.uniform(0.5, 4.0), seed=seed, capacity=cap)
            plan = brute_force_abrp(inst, fairness=False)
            if _dominated_pairs(plan):
                bad.append((N, seed))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = count >= 200 and not bad and elapsed < 600
    _record(acceptance_log, "no dominated route pair in unconstrained optima", ok,
            f"{count} instances, violations={bad or 0}, {elapsed:.1f} s")


@pytest.mark.parametrize("N", [1.0, 60.0, 1e4])
def test_two_route_closed_form(acceptance_log, N):
    g = GOLDEN.two_minus_phi
    alloc = solve_uncapacitated(N, 2)
    want = ((3 + math.sqrt(5)) / 6 * N, (3 - math.sqrt(5)) / 6 * N)
    size_err = max(abs(a - b) / b for a, b in zip(alloc.sizes, want))
    closed = (1 + g**2 + g**3) / (1 + g**2) ** 1.5 * N**1.5
    cost_err = abs(aabrp_cost(alloc) - closed) / closed
    ok = size_err < 1e-9 and cost_err < 1e-9
    _record(acceptance_log, f"two-route closed form N={N:g}", ok,
            f"size err {size_err:.1e}, cost err {cost_err:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
