#!/usr/bin/env python3
"""Benchmark the compiled grid kernels against the pure-Python fallbacks.

The Laplacian fallback is vectorized numpy (already compiled arithmetic),
so the interesting wins are the two breadth-first kernels, whose traversal
is inherently sequential.  Usage: python benchmarks/bench_kernels.py [n]
"""

import sys
import time

import numpy as np

from minksurf import _kernels_py

try:
    from minksurf import _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def make_inputs(n):
    rng = np.random.default_rng(0)
    u = np.linspace(-1, 1, n)[None, :]
    v = np.linspace(-1, 1, n)[:, None]
    values = np.ascontiguousarray(np.sin(3 * u) * np.cosh(v) + 0 * u)
    angle = np.ascontiguousarray(np.angle(np.exp(1j * (4 * u + 2 * v**2 + 0 * u))))
    phi = np.ascontiguousarray(
        rng.standard_normal((4, n, n)) + 1j * rng.standard_normal((4, n, n))
    )
    mask = np.ones((n, n), dtype=np.uint8)
    mask[n // 3 : n // 3 + n // 10, n // 4 : n // 4 + n // 10] = 0
    mask[n // 2, n // 2] = 1
    return values, angle, phi, mask


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 801
    values, angle, phi, mask = make_inputs(n)
    c = n // 2
    cases = [
        ("masked_laplacian", lambda mod: mod.masked_laplacian(values, mask, 0.01, 0.01)),
        ("unwrap_bfs", lambda mod: mod.unwrap_bfs(angle, mask, c, c)),
        ("integrate_bfs", lambda mod: mod.integrate_bfs(phi, mask, c, c, 0.01, 0.01)),
    ]
    print(f"grid {n}x{n}")
    print(f"{'kernel':>18s} {'python (ms)':>12s} {'compiled (ms)':>14s} {'speedup':>8s}")
    for name, call in cases:
        t_py = timeit(lambda: call(_kernels_py))
        if _kernels_cy is not None:
            t_cy = timeit(lambda: call(_kernels_cy))
            print(f"{name:>18s} {1e3 * t_py:12.2f} {1e3 * t_cy:14.2f} {t_py / t_cy:8.1f}x")
        else:
            print(f"{name:>18s} {1e3 * t_py:12.2f} {'n/a':>14s} {'n/a':>8s}")
    if _kernels_cy is None:
        print("compiled kernels unavailable; showing fallback timings only")


if __name__ == "__main__":
    main()
