"""Benchmark the compiled kernel core against the pure numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 1024,8192,65536] [--repeats 7]
"""

import argparse
import time

import numpy as np

from slfem._kernels import pure
from slfem.geometry import gauss_legendre

try:
    from slfem._kernels import _core as core
except ImportError:
    core = None


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workload(n, nq=5):
    rule = gauss_legendre(nq)
    nodes = np.linspace(0.0, 1.0, n + 1)
    h = np.diff(nodes)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    x = mid[:, None] + 0.5 * h[:, None] * rule.points[None, :]
    beta = np.exp(x)
    dbeta = np.exp(x)
    q = x**2
    f = np.sin(5.0 * np.pi * x) * (1.0 + x)
    return nodes, h, rule.points.copy(), rule.weights.copy(), beta, dbeta, q, f


def bench(n, repeats):
    nodes, h, t, w, beta, dbeta, q, f = _workload(n)
    sub, diag, sup, rhs = pure.assemble_compact(h, t, w, beta, dbeta, q, f)
    # interior block (homogeneous Dirichlet) for the solve benchmark
    sub_i, diag_i, sup_i, rhs_i = sub[1:-1].copy(), diag[1:-1].copy(), sup[1:-1].copy(), rhs[1:-1].copy()
    coeffs = np.zeros(n + 1)
    coeffs[1:-1] = pure.thomas(sub_i, diag_i, sup_i, rhs_i)
    xq = np.ascontiguousarray(np.random.default_rng(0).uniform(0.0, 1.0, 200_000))

    rows = []
    for name, args in (
        ("assemble_p1", (h, t, w, beta, q, f)),
        ("assemble_compact", (h, t, w, beta, dbeta, q, f)),
        ("thomas", (sub_i, diag_i, sup_i, rhs_i)),
        ("linear_eval", (nodes, coeffs, xq)),
    ):
        t_pure = _best_of(lambda: getattr(pure, name)(*args), repeats)
        if core is not None:
            t_core = _best_of(lambda: getattr(core, name)(*args), repeats)
            rows.append((name, t_pure, t_core, t_pure / t_core))
        else:
            rows.append((name, t_pure, None, None))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1024,8192,65536")
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if core is None:
        print("compiled core not available; timing the pure backend only")
    print(f"{'kernel':<18} {'n':>7} {'pure [ms]':>10} {'core [ms]':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, t_pure, t_core, speedup in bench(n, args.repeats):
            core_ms = f"{1e3 * t_core:10.3f}" if t_core is not None else f"{'-':>10}"
            ratio = f"{speedup:8.2f}" if speedup is not None else f"{'-':>8}"
            print(f"{name:<18} {n:>7} {1e3 * t_pure:10.3f} {core_ms} {ratio}")


if __name__ == "__main__":
    main()
