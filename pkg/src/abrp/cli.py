"""Command-line entry point: ``abrp <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 exact search ran out of nodes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

from . import kernels
from .allocation import SearchBudgetExceeded, exact_search, gr_heuristic
from .mipexport import export_mip
from .objective import SatisfactionParams, aabrp_cost, satisfaction
from .ratios import RECURSIONS, eta1_limit, nu_chain
from .relaxation import (
    default_route_count,
    kkt_residual,
    solve_capacitated,
    solve_uncapacitated,
)
from .routing import (
    DEFAULT_BETA,
    brute_force_abrp,
    generate_instance,
    instance_to_json,
    read_instance,
    realize,
)

BENCH_CAPACITIES = (16, 18, 20, None)
BENCH_SIZES = (20, 40, 100)
GRID_SIZES = tuple(range(10, 101, 2))

EXIT_OK, EXIT_INVALID, EXIT_TIMEOUT = 0, 2, 3


class UsageError(ValueError):
    pass


UNSET = object()  # --c not given; argparse leaves non-string defaults alone


def _capacity(text: str) -> Optional[int]:
    if text.lower() in ("none", "inf", "uncap"):
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"capacity must be a positive integer or 'none', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"capacity must be >= 1, got {value}")
    return value


def _z(value: float) -> float:
    return round(value, 4)


# --- output ---------------------------------------------------------------

def _markdown(rows: list[dict]) -> str:
    keys = list(rows[0])
    lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row[k]) for k in keys) + " |")
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6f}".rstrip("0").rstrip(".") if abs(value) < 1e6 else repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    return str(value)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) if isinstance(v, (list, tuple)) or v is None else v for k, v in row.items()})
    return buf.getvalue()


def _render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    rows = payload.get("rows") if isinstance(payload, dict) and "rows" in payload else payload
    if isinstance(rows, dict):
        rows = [rows]
    return _markdown(rows) if fmt == "markdown" else _csv(rows)


def _emit(args, payload) -> None:
    text = _render(payload, args.format)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------

def _problem(args):
    """``(N, C, params, instance)`` from either ``--input`` or flags."""
    if getattr(args, "input", None):
        inst = read_instance(args.input)
        cap = inst.capacity if args.c is UNSET else args.c
        params = inst.params
        return inst.n, cap, params, inst
    if args.n is None:
        raise UsageError("one of --n or --input is required")
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    cap = None if args.c is UNSET else args.c
    return args.n, cap, SatisfactionParams(a=args.a, b=args.b, kappa=args.kappa), None


def cmd_solve(args):
    N, C, params, inst = _problem(args)
    alloc = gr_heuristic(N, C)
    out = {"n": N, "c": C, "alloc": list(alloc.sizes), "z": _z(satisfaction(alloc, params))}
    if inst is not None:
        out["realized_objective"] = realize(inst, alloc).objective
    return out


def cmd_exact(args):
    N, C, params, inst = _problem(args)
    if N > 200:
        raise UsageError(f"exact search needs --n <= 200, got {N}")
    res = exact_search(N, C)
    out = {"n": N, "c": C, "alloc": list(res.alloc.sizes), "z": _z(satisfaction(res.alloc, params)),
           "nodes": res.nodes}
    if inst is not None:
        out["realized_objective"] = realize(inst, res.alloc).objective
    return out


def cmd_relax(args):
    if args.n is None or not args.n > 0:
        raise UsageError("--n must be a positive number")
    C = None if args.c is UNSET else args.c
    k = args.k if args.k is not None else default_route_count(args.n, args.recursion)
    if not 1 <= k <= 64:
        raise UsageError(f"--k must lie in 1..64, got {k}")
    if C is None:
        alloc = solve_uncapacitated(args.n, k, args.recursion)
    else:
        if k * C < args.n:
            raise UsageError(f"infeasible: k*C = {k * C} < N = {args.n}")
        alloc = solve_capacitated(args.n, C, k, args.recursion)
    report = kkt_residual(alloc, C)
    return {"n": args.n, "c": C, "k": alloc.k, "recursion": args.recursion,
            "sizes": list(alloc.sizes), "cost": aabrp_cost(alloc), "kkt_spread": report.spread}


def ratio_rows(recursion: str = "tabulated") -> list[dict]:
    rows = []
    for k in range(2, 11):
        t = nu_chain(k, recursion)
        rows.append({
            "k": k,
            "eta1": round(t.eta1, 6),
            "inv_nu1": round(1.0 / t.nu_at(1), 6),
            "inv_nu2": round(1.0 / t.nu_at(2), 6) if k > 2 else None,
        })
    return rows


def cmd_table1(args):
    return {"rows": ratio_rows(args.recursion), "limit": round(eta1_limit(args.tol, args.recursion), 6)}


def comparison_rows(capacities=BENCH_CAPACITIES, sizes=BENCH_SIZES,
                params: SatisfactionParams = SatisfactionParams()) -> list[dict]:
    rows = []
    for C in capacities:
        for N in sizes:
            exact = exact_search(N, C).alloc
            heur = gr_heuristic(N, C)
            rows.append({
                "C": C,
                "N": N,
                "exact_z": _z(satisfaction(exact, params)),
                "exact_alloc": list(exact.sizes),
                "gr_z": _z(satisfaction(heur, params)),
                "gr_alloc": list(heur.sizes),
                "differs": exact.sizes != heur.sizes,
                "rel_gap": (satisfaction(exact, params) - satisfaction(heur, params)) / satisfaction(exact, params),
            })
    return rows


def cmd_table2(args):
    if args.grid:
        rows = comparison_rows(sizes=GRID_SIZES)
        same = sum(not r["differs"] for r in rows)
        mean_gap = math.fsum(r["rel_gap"] for r in rows) / len(rows)
        return {"rows": rows, "instances": len(rows), "identical": same, "mean_rel_gap": mean_gap}
    return {"rows": comparison_rows()}


def cmd_gen(args):
    if args.n is None or args.n < 1:
        raise UsageError("--n must be >= 1")
    if not args.area > 0:
        raise UsageError("--area must be > 0")
    C = None if args.c is UNSET else args.c
    inst = generate_instance(args.n, area=args.area, seed=args.seed, capacity=C,
                             a=args.a, b=args.b, beta=args.beta)
    text = instance_to_json(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None


def _instance_arg(args):
    if args.input:
        return read_instance(args.input)
    if args.n is None:
        raise UsageError("one of --n or --input is required")
    C = None if args.c is UNSET else args.c
    return generate_instance(args.n, area=args.area, seed=args.seed, capacity=C,
                             a=args.a, b=args.b, beta=args.beta)


def cmd_brute(args):
    inst = _instance_arg(args)
    if inst.n > 9:
        raise UsageError(f"brute force needs N <= 9, got {inst.n}")
    plan = brute_force_abrp(inst, fairness=args.fairness == "on")
    return {"n": inst.n, "fairness": args.fairness, "objective": plan.objective,
            "routes": [list(r) for r in plan.routes], "sizes": list(plan.sizes),
            "tour_durations": list(plan.tour_durations),
            "completion_times": list(plan.completion_times)}


def cmd_export(args):
    inst = _instance_arg(args)
    if inst.n > 50:
        raise UsageError(f"MIP export needs N <= 50, got {inst.n}")
    text = export_mip(inst, routes=args.routes, fairness=args.fairness == "on")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None


def cmd_bench(args):
    from .bench import run

    return {"active": kernels.IMPLEMENTATION, "rows": run(args.repeat)}


# --- parser ---------------------------------------------------------------

def _add_params(p, kappa=True):
    p.add_argument("--a", type=float, default=1.0, help="satisfaction intercept")
    p.add_argument("--b", type=float, default=0.01, help="satisfaction slope")
    if kappa:
        p.add_argument("--kappa", type=float, default=1.0, help="route time per sqrt(individual)")


def _add_geometry(p):
    p.add_argument("--n", type=int)
    p.add_argument("--input", help="instance JSON file")
    p.add_argument("--c", type=_capacity, default=UNSET, help="capacity or 'none'")
    p.add_argument("--area", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    _add_params(p, kappa=False)


FORMATS = ("json", "csv", "markdown")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abrp", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=FORMATS, default="json")
    # also accepted after the command name
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[fmt], **kw)

    for name, fn, help_ in (("solve", cmd_solve, "golden-ratio heuristic allocation"),
                            ("exact", cmd_exact, "exact integer allocation")):
        p = add(name, help=help_)
        p.add_argument("--n", type=int)
        p.add_argument("--input", help="instance JSON file")
        p.add_argument("--c", type=_capacity, default=UNSET, help="capacity or 'none'")
        _add_params(p)
        p.add_argument("--out")
        p.set_defaults(func=fn)

    p = add("relax", help="continuous relaxation optimum")
    p.add_argument("--n", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--c", type=_capacity, default=UNSET)
    p.add_argument("--recursion", choices=RECURSIONS, default="stationary")
    p.add_argument("--out")
    p.set_defaults(func=cmd_relax)

    p = add("table1", help="first-route fractions and ratios for k = 2..10")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--recursion", choices=RECURSIONS, default="tabulated")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = add("table2", help="exact vs heuristic on the benchmark instances")
    p.add_argument("--grid", action="store_true", help="all 184 instances N = 10..100 step 2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table2)

    p = add("gen", help="generate a uniform instance file")
    _add_geometry(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = add("brute", help="exact routing optimum for N <= 9")
    _add_geometry(p)
    p.add_argument("--fairness", choices=("on", "off"), default="on")
    p.add_argument("--out")
    p.set_defaults(func=cmd_brute)

    p = add("export-mip", help="write the routing MIP in LP format")
    _add_geometry(p)
    p.add_argument("--routes", type=int)
    p.add_argument("--fairness", choices=("on", "off"), default="off")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = add("bench", help="compiled vs pure-Python kernel timings")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: --help is 0, bad flags are 2
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"abrp: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (ValueError, TypeError, OSError) as exc:
        print(f"abrp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if payload is not None:
        _emit(args, payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
