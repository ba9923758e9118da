#!/usr/bin/env python3
"""Benchmark the oracle's hot quadrature loop: compiled extension vs numpy fallback.

Usage: python benchmarks/bench_oracle.py [--repeats N]

Times the one-mode vacuum propagation (the inner loop of every verification
run) at several grid sizes, plus one end-to-end displacement-expectation
evaluation, and prints the speedup.
"""

import argparse
import time

import numpy as np

import sympcov as sc
from sympcov import _kernels

try:
    from sympcov import _speedups
except ImportError:
    _speedups = None


def propagation_args(points):
    """A representative one-mode kernel quadrature at the given grid size."""
    M = sc.random_symplectic(1, scale=0.6, seed=7)
    spec = sc.KernelSpec.build(M, sc.OscillatorSystem.unit(1))
    grid = sc.Grid(center=(0.0,), extent=10.0, points=points)
    coords = grid.coords()
    source = np.exp(-coords[:, 0] ** 2 / 2.0) / np.pi**0.25 * grid.weights()
    return (
        coords[:, 0],
        coords[:, 0],
        source,
        float(spec.d_binv[0, 0]),
        float(spec.binv[0, 0]),
        float(spec.binv_a[0, 0]),
        0.5,
    )


def best_of(fn, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"active backend at import: {sc.active_backend()}")
    if _speedups is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'grid':>8} {'numpy':>12} {'compiled':>12} {'speedup':>9}")
    for points in (512, 1024, 2048, 4096):
        call_args = propagation_args(points)
        t_np = best_of(_kernels.propagate_1d, call_args, args.repeats)
        if _speedups is not None:
            t_cy = best_of(_speedups.propagate_1d, call_args, args.repeats)
            print(f"{points:>8} {t_np * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms {t_np / t_cy:>8.1f}x")
        else:
            print(f"{points:>8} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>9}")

    # end-to-end displacement expectation on the active backend
    M = sc.random_symplectic(1, scale=0.6, seed=7)
    spec = sc.KernelSpec.build(M, sc.OscillatorSystem.unit(1))
    w = sc.WeylLabel([0.8], [0.33])
    grid = sc.default_grid(spec, w=w)
    start = time.perf_counter()
    value = sc.numeric_amplitude(spec, w, grid)
    elapsed = time.perf_counter() - start
    closed = sc.amplitude(M, sc.OscillatorSystem.unit(1), w)
    print(
        f"\nend-to-end displacement expectation ({grid.points}-point grid, "
        f"{sc.active_backend()}): {elapsed * 1e3:.1f} ms, |numeric - closed| = "
        f"{abs(value.real - closed):.2e}"
    )


if __name__ == "__main__":
    main()
