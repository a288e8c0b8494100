"""Timing comparison of the compiled kernel against the NumPy reference.

Runs the three kernel entry points on representative workloads and prints
the per-call times and speedups.  Usage:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from ghzdistill import kernels

PARAMS = (0.83, np.sqrt(1 - 0.83**2), 0.31, 0.54, 0.22)  # mu1, mu2, sa, sb, sc


def timeit(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scalar(mod, n=200_000):
    def run():
        f = mod.objective_value
        for x in xs_scalar:
            f(*PARAMS, x)
    return timeit(run)


def bench_batch(mod):
    return timeit(mod.objective_batch, *PARAMS, xs_batch)


def bench_grid(mod):
    return timeit(mod.grid_max, *PARAMS, 1e-6, 1e6, 100_000)


if __name__ == "__main__":
    xs_scalar = np.exp(np.random.default_rng(0).uniform(-10, 10, 200_000)).tolist()
    xs_batch = np.exp(np.linspace(np.log(1e-6), np.log(1e6), 1_000_000))

    print(f"active backend: {kernels.BACKEND}")
    if kernels.fast is None:
        print("compiled kernel not built; nothing to compare")
        raise SystemExit(0)

    rows = [
        ("scalar objective, 200k calls", bench_scalar),
        ("batch objective, 1M points", bench_batch),
        ("grid max, 100k points", bench_grid),
    ]
    print(f"{'workload':34s} {'reference':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, bench in rows:
        t_ref = bench(kernels.reference)
        t_fast = bench(kernels.fast)
        print(f"{name:34s} {t_ref * 1e3:10.1f}ms {t_fast * 1e3:10.1f}ms "
              f"{t_ref / t_fast:8.1f}x")

    # consistency spot check alongside the timings
    xs = np.exp(np.linspace(-5, 5, 1001))
    dev = np.max(np.abs(kernels.reference.objective_batch(*PARAMS, xs)
                        - kernels.fast.objective_batch(*PARAMS, xs)))
    print(f"max |reference - compiled| on a 1001-point sweep: {dev:.2e}")
