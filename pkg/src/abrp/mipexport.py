"""LP-format text for the exact multi-trip routing MIP.

Rows, by constraint family:

* ``assign_i``      every customer on exactly one route
* ``cap_k``         route load at most C
* ``tour_k``        ``t_k`` equals the arc lengths used by route k
* ``arr_i_k``       ``A_i >= t_1 + ... + t_k - M (1 - y_i_k)``
* ``out_i_k`` / ``in_i_k``  degree of node i on route k equals ``y_i_k``
* ``depot_u``       ``u_0 = 1``
* ``mtz_i_j_k``     ``u_j - u_i >= 1 - N (1 - x_i_j_k)``
* ``fair_i``        optional request-order constraint

The objective ``sum_i (a - b A_i)`` keeps its constant through a variable
``const_one`` fixed to 1.
"""

from __future__ import annotations

import io
from typing import Optional


from .routing import Instance

__all__ = ["MAX_EXPORT_N", "export_mip", "row_counts"]

MAX_EXPORT_N = 50
_TERMS_PER_LINE = 8


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _terms(terms) -> str:
    """``terms`` is a list of ``(coef, var)``; zero coefficients are dropped."""
    parts = []
    for coef, var in terms:
        if coef == 0:
            continue
        mag = abs(coef)
        body = var if mag == 1 else f"{_num(mag)} {var}"
        if parts:
            parts.append(f"{'-' if coef < 0 else '+'} {body}")
        else:
            parts.append(f"-{body}" if coef < 0 else body)
    lines = [" ".join(parts[i : i + _TERMS_PER_LINE]) for i in range(0, len(parts), _TERMS_PER_LINE)]
    return "\n   ".join(lines)


def _write_expr(out, name: str, terms, sense: str, rhs: float) -> None:
    out.write(f" {name}: {_terms(terms)} {sense} {_num(rhs)}\n")


def row_counts(N: int, routes: Optional[int] = None, fairness: bool = False) -> dict[str, int]:
    """Number of rows per constraint family for ``N`` customers."""
    K = N if routes is None else routes
    counts = {
        "assign": N,
        "cap": K,
        "tour": K,
        "arr": N * K,
        "out": (N + 1) * K,
        "in": (N + 1) * K,
        "depot_u": 1,
        "mtz": N * (N - 1) * K,
    }
    if fairness:
        counts["fair"] = max(N - 1, 0)
    return counts


def export_mip(instance: Instance, routes: Optional[int] = None, fairness: bool = False) -> str:
    """The exact routing model of ``instance`` as CPLEX LP text.

    ``routes`` defaults to N (one potential route per customer).  Variable
    names are ``y_i_k``, ``x_i_j_k``, ``A_i``, ``t_k`` and ``u_i`` with node 0
    the depot.
    """
    N = instance.n
    if N > MAX_EXPORT_N:
        raise ValueError(f"export is limited to N <= {MAX_EXPORT_N}, got {N}")
    K = N if routes is None else int(routes)
    if K < 1:
        raise ValueError(f"routes must be >= 1, got {K}")
    C = N if instance.capacity is None else instance.capacity
    d = instance.distances()
    dmax = float(d.max())
    big_m = N * dmax * N
    a, b = instance.a, instance.b
    V = range(N + 1)
    cust = range(1, N + 1)
    R = range(1, K + 1)

    out = io.StringIO()
    out.write("\\ Multi-trip single-vehicle routing, cumulative linear satisfaction a - b*A_i\n")
    out.write(f"\\ N = {N}, routes = {K}, capacity = {C}, a = {_num(a)}, b = {_num(b)}\n")
    out.write(f"\\ big-M = N * max(d_ij) * N = {_num(big_m)} bounds every sum of route times\n")
    out.write(f"\\ constant a*N enters through const_one = 1; fairness rows: {'yes' if fairness else 'no'}\n")

    out.write("Maximize\n")
    out.write(f" obj: {_terms([(a * N, 'const_one')] + [(-b, f'A_{i}') for i in cust])}\n")

    out.write("Subject To\n")
    for i in cust:
        _write_expr(out, f"assign_{i}", [(1, f"y_{i}_{k}") for k in R], "=", 1)
    for k in R:
        _write_expr(out, f"cap_{k}", [(1, f"y_{i}_{k}") for i in cust], "<=", C)
    for k in R:
        terms = [(1, f"t_{k}")]
        terms += [(-d[i, j], f"x_{i}_{j}_{k}") for i in V for j in V if i != j]
        _write_expr(out, f"tour_{k}", terms, "=", 0)
    for i in cust:
        for k in R:
            terms = [(1, f"A_{i}")] + [(-1, f"t_{h}") for h in range(1, k + 1)] + [(-big_m, f"y_{i}_{k}")]
            _write_expr(out, f"arr_{i}_{k}", terms, ">=", -big_m)
    for k in R:
        for i in V:
            _write_expr(out, f"out_{i}_{k}", [(1, f"y_{i}_{k}")] + [(-1, f"x_{i}_{j}_{k}") for j in V if j != i], "=", 0)
            _write_expr(out, f"in_{i}_{k}", [(1, f"y_{i}_{k}")] + [(-1, f"x_{j}_{i}_{k}") for j in V if j != i], "=", 0)
    _write_expr(out, "depot_u", [(1, "u_0")], "=", 1)
    for k in R:
        for i in cust:
            for j in cust:
                if i != j:
                    _write_expr(out, f"mtz_{i}_{j}_{k}", [(1, f"u_{j}"), (-1, f"u_{i}"), (-N, f"x_{i}_{j}_{k}")], ">=", 1 - N)
    if fairness:
        for i in range(1, N):
            terms = [(k, f"y_{i}_{k}") for k in R] + [(-k, f"y_{i + 1}_{k}") for k in R]
            _write_expr(out, f"fair_{i}", terms, "<=", 0)

    out.write("Bounds\n")
    out.write(" const_one = 1\n")
    out.write(" u_0 free\n")
    for i in cust:
        out.write(f" 2 <= u_{i} <= {N + 1}\n")
    out.write("Binaries\n")
    names = [f"y_{i}_{k}" for i in V for k in R]
    names += [f"x_{i}_{j}_{k}" for k in R for i in V for j in V if i != j]
    for start in range(0, len(names), _TERMS_PER_LINE):
        out.write(" " + " ".join(names[start : start + _TERMS_PER_LINE]) + "\n")
    out.write("End\n")
    return out.getvalue()
