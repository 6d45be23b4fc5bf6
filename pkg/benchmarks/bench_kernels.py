#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from wuglabels import _fallback

try:
    from wuglabels import _speedups
except ImportError:
    _speedups = None


def bench(fn, args_list, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def lcs_workload(rng: random.Random, n_pairs: int = 200):
    # definition-sized token sequences (tens of tokens)
    return [
        (
            [rng.randrange(50) for _ in range(rng.randint(10, 40))],
            [rng.randrange(50) for _ in range(rng.randint(10, 40))],
        )
        for _ in range(n_pairs)
    ]


def hash_workload(rng: random.Random, n_texts: int = 500):
    words = ["bank", "river", "institution", "slope", "money", "water",
             "definition", "meaning", "sense", "usage"]
    return [
        (" ".join(rng.choice(words) for _ in range(rng.randint(5, 30))),
         256, 3, 7919)
        for _ in range(n_texts)
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(1)
    workloads = [
        ("lcs_length (200 pairs, 10-40 tokens)", "lcs_length",
         lcs_workload(rng)),
        ("hash_ngram_counts (500 texts, dim 256)", "hash_ngram_counts",
         hash_workload(rng)),
    ]

    print(f"{'kernel':<42}{'python':>12}{'cython':>12}{'speedup':>10}")
    for label, name, workload in workloads:
        py = bench(getattr(_fallback, name), workload, args.repeats)
        if _speedups is None:
            print(f"{label:<42}{py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        cy = bench(getattr(_speedups, name), workload, args.repeats)
        print(f"{label:<42}{py * 1e3:>10.2f}ms{cy * 1e3:>10.2f}ms"
              f"{py / cy:>9.1f}x")
    if _speedups is None:
        print("\ncompiled extension not available; showing fallback only")


if __name__ == "__main__":
    main()
