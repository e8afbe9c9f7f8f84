"""Benchmark the compiled kernels against the numpy fallback.

Runs the three exhaustive-scan workloads that dominate toolkit runtime
(exact separation search, concentration grid, Prohorov distance) with each
backend and prints a timing table. Usage:

    python3 benchmarks/kernel_bench.py [--sizes 8,10,12]
"""

import argparse
import time

import numpy as np

import mmkit.kernels as kernels
from mmkit.kernels import _fallback
from mmkit import family, separation_distance, concentration_function, prohorov
from mmkit.harness import random_measure, random_space
from mmkit.separation import distance_grid
from mmkit.transport import space_measure

try:
    from mmkit.kernels import _core
except ImportError:
    _core = None

KERNEL_NAMES = ("subset_measures", "max_complement_measure", "max_coverage_deficit", "sep_feasible")


def swap_backend(module) -> None:
    for name in KERNEL_NAMES:
        setattr(kernels, name, getattr(module, name))


def workloads(n: int):
    space = random_space(n, seed=42, random_mu=True)
    cyc = family("cycle", n=min(n, 12))
    grid = distance_grid(space)
    nu = random_measure(space, np.random.default_rng(7))

    def run_sep():
        separation_distance(space, (0.2, 0.2, 0.2)).value
        separation_distance(cyc, (2 / cyc.n, 2 / cyc.n)).value

    def run_conc():
        for r in grid:
            concentration_function(space, float(r))

    def run_prohorov():
        for lam in (0.5, 1.0, 2.0):
            prohorov(space, space_measure(space), nu, lam)

    return [("sep exact", run_sep), ("concentration grid", run_conc), ("prohorov", run_prohorov)]


def time_call(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="8,10,12")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = [("fallback", _fallback)] + ([("compiled", _core)] if _core else [])
    print(f"{'workload':<24} {'n':>3}  " + "  ".join(f"{name:>10}" for name, _ in backends) + "  speedup")
    for n in sizes:
        for label, fn in workloads(n):
            times = []
            for _name, module in backends:
                swap_backend(module)
                times.append(time_call(fn))
            swap_backend(_core if _core else _fallback)
            row = "  ".join(f"{t * 1e3:9.1f}ms" for t in times)
            speedup = f"{times[0] / times[-1]:7.1f}x" if len(times) == 2 else "      -"
            print(f"{label:<24} {n:>3}  {row}  {speedup}")
    if _core is None:
        print("compiled extension not available; fallback timings only")


if __name__ == "__main__":
    main()
