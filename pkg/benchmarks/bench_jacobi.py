#!/usr/bin/env python3
"""Benchmark the compiled Jacobi kernel against the numpy fallback.

Usage: python benchmarks/bench_jacobi.py [--sizes 32,64,128,256] [--repeats 3]

Reports per-size wall time for each available backend, the speedup, and the
worst eigenvalue disagreement between them.
"""

import argparse
import time

import numpy as np

from semiframes import _kernels


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (a + a.conj().T)


def time_backend(fn, matrices, repeats):
    best = float("inf")
    vals = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = [fn(a, 1e-13, 100) for a in matrices]
        best = min(best, time.perf_counter() - start)
        vals = [np.sort(v[0]) for v in out]
    return best, vals


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="32,64,128,256")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--matrices", type=int, default=2, help="matrices per size")
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    backends = _kernels.available_backends()
    print(f"backends available: {', '.join(backends)} (active: {_kernels.backend_name()})")
    header = f"{'size':>6} " + "".join(f"{name:>14} " for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>9} {'max |dλ|':>12}"
    print(header)

    rng = np.random.default_rng(7)
    for d in sizes:
        matrices = [random_hermitian(rng, d) for _ in range(args.matrices)]
        times = {}
        values = {}
        for name, fn in backends.items():
            times[name], values[name] = time_backend(fn, matrices, args.repeats)
        row = f"{d:>6} " + "".join(f"{times[name]:>13.4f}s" for name in backends)
        if len(backends) == 2:
            speedup = times["python"] / times["compiled"]
            gap = max(
                float(np.max(np.abs(a - b)))
                for a, b in zip(values["python"], values["compiled"])
            )
            row += f"{speedup:>8.1f}x {gap:>12.2e}"
        print(row)


if __name__ == "__main__":
    main()
