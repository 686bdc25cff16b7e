#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against their pure-Python/numpy twins.

Usage:
    python benchmarks/bench_kernels.py [--nodes N] [--edges M] [--points P]
                                       [--dim D] [--k K] [--repeat R]

Run with PATMINE_NO_NUMBA unset so both paths are available; the jitted
variants are warmed up before timing so compilation is excluded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from patmine import _accel


def random_csr(n, m, seed=0):
    rng = np.random.default_rng(seed)
    pairs = set()
    while len(pairs) < m:
        u, v = rng.integers(0, n, 2)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    pairs = sorted(pairs)
    us = np.empty(2 * len(pairs), np.int64)
    vs = np.empty(2 * len(pairs), np.int64)
    for i, (a, b) in enumerate(pairs):
        us[2 * i], vs[2 * i] = a, b
        us[2 * i + 1], vs[2 * i + 1] = b, a
    order = np.lexsort((vs, us))
    us, vs = us[order], vs[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, us + 1, 1)
    weights = rng.integers(1, 5, len(vs)).astype(np.float64)
    return np.cumsum(indptr), vs, weights


def timeit(fn, *args, repeat=3, warmup=True):
    if warmup:
        fn(*args)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=500)
    parser.add_argument("--edges", type=int, default=2000)
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--dim", type=int, default=32)
    parser.add_argument("--k", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=1)
    args = parser.parse_args()

    if not _accel.NUMBA_ENABLED:
        print("numba disabled (PATMINE_NO_NUMBA set or not installed); "
              "only the fallback path can be timed.")

    indptr, indices, weights = random_csr(args.nodes, args.edges)
    n = args.nodes
    rng = np.random.default_rng(7)
    X = rng.normal(size=(args.points, args.dim))
    C = rng.normal(size=(args.k, args.dim))
    labels, _ = _accel.assign_points_py(X, C)
    x = rng.random(n)

    lengths = 1.0 / weights
    rows = [
        ("betweenness", _accel.betweenness_py, _accel.betweenness,
         (indptr, indices, n)),
        ("closeness", _accel.closeness_sums_py, _accel.closeness_sums,
         (indptr, indices, n)),
        ("betweenness wtd", _accel.betweenness_weighted_py,
         _accel.betweenness_weighted, (indptr, indices, lengths, n)),
        ("closeness wtd", _accel.dijkstra_closeness_sums_py,
         _accel.dijkstra_closeness_sums, (indptr, indices, lengths, n)),
        ("matvec", _accel.matvec_py, _accel.matvec,
         (indptr, indices, weights, x)),
        ("kmeans assign", _accel.assign_points_py, _accel.assign_points,
         (X, C)),
        ("kmeans update", _accel.update_centroids_py, _accel.update_centroids,
         (X, labels, args.k, C)),
    ]

    print(f"{'kernel':<16}{'fallback':>12}{'numba':>12}{'speedup':>10}")
    for name, py_fn, fast_fn, fnargs in rows:
        t_py = timeit(py_fn, *fnargs, repeat=args.repeat, warmup=False)
        if _accel.NUMBA_ENABLED:
            t_nb = timeit(fast_fn, *fnargs, repeat=args.repeat, warmup=True)
            print(f"{name:<16}{t_py:>11.4f}s{t_nb:>11.4f}s{t_py / t_nb:>9.1f}x")
        else:
            print(f"{name:<16}{t_py:>11.4f}s{'-':>12}{'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
