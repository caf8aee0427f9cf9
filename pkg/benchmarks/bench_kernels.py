"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse

from abrp import kernels
from abrp.bench import run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"active backend: {kernels.IMPLEMENTATION}")
    print(f"{'kernel':<18}{'size':<14}{'python s':>11}{'compiled s':>12}{'speedup':>9}  same")
    for r in run(args.repeat):
        comp = "-" if r["compiled_s"] is None else f"{r['compiled_s']:.5f}"
        speed = "-" if r["speedup"] is None else f"{r['speedup']:.1f}x"
        print(f"{r['kernel']:<18}{r['size']:<14}{r['python_s']:>11.5f}{comp:>12}{speed:>9}  {r['identical']}")


if __name__ == "__main__":
    main()
