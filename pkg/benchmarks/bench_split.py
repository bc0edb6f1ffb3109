#!/usr/bin/env python3
"""Benchmark the compiled split kernel against the pure numpy fallback.

Runs the best-split scan over sorted columns of growing size and over a
realistic tree-training workload (random forest on dense features), and
prints a timing table.  Use POSTSIFT_NO_EXT=1 to force the fallback in a
real run; here both backends are timed side by side in one process.
"""

import time

import numpy as np

from postsift import _split

try:
    from postsift import _split_fast
except ImportError:
    _split_fast = None


def time_kernel(kernel, values, labels, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        kernel(values, labels)
        best = min(best, time.perf_counter() - start)
    return best


def bench_raw_scan():
    print(f"{'n':>10} {'numpy (ms)':>12} {'cython (ms)':>12} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for n in (1_000, 10_000, 100_000, 1_000_000):
        values = np.sort(rng.normal(size=n))
        labels = rng.integers(0, 2, size=n)
        repeats = max(3, 2_000_000 // n)
        t_numpy = time_kernel(_split.best_split_sorted, values, labels, repeats)
        if _split_fast is None:
            print(f"{n:>10} {t_numpy * 1e3:>12.3f} {'-':>12} {'-':>9}")
            continue
        t_cython = time_kernel(_split_fast.best_split_sorted, values, labels,
                               repeats)
        print(f"{n:>10} {t_numpy * 1e3:>12.3f} {t_cython * 1e3:>12.3f} "
              f"{t_numpy / t_cython:>8.1f}x")


def bench_forest():
    from postsift.models import ModelSpec
    from postsift.models import tree as tree_mod

    rng = np.random.default_rng(1)
    X = rng.normal(size=(2000, 20))
    y = (X[:, 0] + 0.5 * rng.normal(size=2000) > 0).astype(np.int64)
    spec = ModelSpec("rforest", {"n_trees": 20}, seed=0)

    results = {}
    saved = tree_mod._kernel
    for name, kernel in (("numpy", _split.best_split_sorted),
                         ("cython", None if _split_fast is None
                          else _split_fast.best_split_sorted)):
        if kernel is None:
            continue
        tree_mod._kernel = kernel
        start = time.perf_counter()
        tree_mod.train_rforest(spec, X, y)
        results[name] = time.perf_counter() - start
    tree_mod._kernel = saved

    print()
    print("random forest, 20 trees, 2000x20:")
    for name, seconds in results.items():
        print(f"  {name:>7}: {seconds:.2f} s")
    if len(results) == 2:
        print(f"  speedup: {results['numpy'] / results['cython']:.1f}x")


if __name__ == "__main__":
    if _split_fast is None:
        print("note: compiled kernel unavailable; timing fallback only")
    bench_raw_scan()
    bench_forest()
