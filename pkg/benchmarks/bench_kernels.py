#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Outputs JSON (``--output``) or a small table.  The same comparison can be
driven end-to-end by running the test suite with TGMATCH_DISABLE_NUMBA=1.
"""

import argparse
import json
import sys
import time

import numpy as np

from tgmatch import _kernels

WARMUP_RUNS = 3
BENCH_RUNS = 7


def bench(fn, *args, runs=BENCH_RUNS):
    for _ in range(WARMUP_RUNS):
        fn(*args)
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return {"min": min(times), "mean": sum(times) / len(times), "runs": times}


def incidence_case(rng, n_nodes, n_edges):
    src = rng.integers(0, n_nodes, size=n_edges).astype(np.int64)
    dst = rng.integers(0, n_nodes, size=n_edges).astype(np.int64)
    return (src, dst, n_nodes)


def bin_counts_case(rng, n):
    return (rng.uniform(0, 1e6, size=n), 0.0, 86400.0)


def offset_sweep_case(rng, n, sweeps=5):
    t1 = np.sort(rng.uniform(0, 1e5, size=n))
    t2 = np.sort(rng.uniform(0, 1e5, size=n))
    offsets = np.array([0.0, -86400.0, 86400.0, -172800.0, 172800.0][:sweeps])
    return (t1, t2, 86400.0, offsets)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", "-o", help="write JSON results to this path")
    parser.add_argument("--edges", type=int, default=1_000_000)
    parser.add_argument("--nodes", type=int, default=100_000)
    args = parser.parse_args()

    if not _kernels.NUMBA_ENABLED:
        print("numba is disabled or unavailable; nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(7)
    cases = {
        "build_incidence": incidence_case(rng, args.nodes, args.edges),
        "bin_counts": bin_counts_case(rng, args.edges),
        "offset_sweep_small": offset_sweep_case(rng, 16),
        "offset_sweep_large": offset_sweep_case(rng, 4096),
    }
    kernel_of = {
        "build_incidence": "build_incidence",
        "bin_counts": "bin_counts",
        "offset_sweep_small": "offset_sweep",
        "offset_sweep_large": "offset_sweep",
    }

    results = {
        "edges": args.edges,
        "nodes": args.nodes,
        "warmup_runs": WARMUP_RUNS,
        "bench_runs": BENCH_RUNS,
        "cases": {},
    }
    for name, case_args in cases.items():
        kernel = kernel_of[name]
        numba_fn = _kernels.IMPLEMENTATIONS["numba"][kernel]
        numpy_fn = _kernels.IMPLEMENTATIONS["numpy"][kernel]
        nb = bench(numba_fn, *case_args)
        npy = bench(numpy_fn, *case_args)
        results["cases"][name] = {
            "numba": nb,
            "numpy": npy,
            "speedup": npy["min"] / nb["min"] if nb["min"] > 0 else float("inf"),
        }

    if args.output:
        with open(args.output, "w") as fh:
            json.dump(results, fh, indent=2)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        width = max(len(n) for n in results["cases"])
        print(f"{'case'.ljust(width)}  {'numba':>12}  {'numpy':>12}  {'speedup':>8}")
        for name, row in results["cases"].items():
            print(f"{name.ljust(width)}  {row['numba']['min'] * 1e3:10.2f}ms  "
                  f"{row['numpy']['min'] * 1e3:10.2f}ms  {row['speedup']:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
