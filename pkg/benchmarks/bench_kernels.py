"""Benchmark the compiled kernels against the pure-python fallback.

Runs the three hot loops (Jacobi eigensolve, quadratic-exponential
quadrature reduction, reproducing-kernel transform) on representative
sizes and prints a timing table with speedups.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from bargtop import _kernels_py

try:
    from bargtop import _kernels_c
except ImportError:
    _kernels_c = None


def timer(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def cases(rng):
    herm = []
    for n in (4, 8, 12):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        herm.append((f"jacobi_eigh {n}x{n} x40", a + a.conj().T))

    x, w = np.polynomial.legendre.leggauss(400)
    nodes, weights = 6.0 * x, 6.0 * w
    vals = np.exp(-0.1 * (nodes[:, None] ** 2 + nodes[None, :] ** 2)).astype(complex)
    m64 = np.polynomial.legendre.leggauss(64)
    nodes64, weights64 = 6.0 * m64[0], 6.0 * m64[1]
    vals64 = (rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)))
    targets = (nodes64[:, None] + 1j * nodes64[None, :]).ravel()

    def bench(mod):
        return {
            "jacobi_eigh 4-12 x40": lambda: [mod.jacobi_eigh(h) for _, h in herm for _ in range(14)],
            "quad_sum m=400": lambda: mod.quad_sum(
                nodes, nodes, weights, weights, 0.02j, -0.5, 0.01, 0.3, -0.2j),
            "quad_sum_weighted m=400": lambda: mod.quad_sum_weighted(
                nodes, nodes, weights, weights, vals, 0.02j, -0.5, 0.01, 0.3, -0.2j),
            "kernel_apply m=64 -> 4096 targets": lambda: mod.kernel_apply(
                targets, nodes64, nodes64, weights64, weights64, vals64, 0.5),
        }
    return bench


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    bench = cases(rng)
    py = bench(_kernels_py)
    rows = []
    for name, fn in py.items():
        t_py = timer(fn, args.repeat)
        if _kernels_c is not None:
            t_c = timer(bench(_kernels_c)[name], args.repeat)
            rows.append((name, t_py, t_c, t_py / t_c))
        else:
            rows.append((name, t_py, None, None))

    width = max(len(r[0]) for r in rows)
    header = f"{'kernel'.ljust(width)}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, t_py, t_c, speedup in rows:
        if t_c is None:
            print(f"{name.ljust(width)}  {t_py * 1e3:8.2f}ms  {'n/a':>10}  {'n/a':>8}")
        else:
            print(f"{name.ljust(width)}  {t_py * 1e3:8.2f}ms  {t_c * 1e3:8.2f}ms  {speedup:7.2f}x")
    if _kernels_c is None:
        print("\ncompiled kernels not built; run pip install -e . with Cython available")


if __name__ == "__main__":
    main()
