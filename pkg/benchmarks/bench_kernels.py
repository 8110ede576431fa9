"""Compare the numba-compiled and pure-numpy kernel paths.

Run:  python3 benchmarks/bench_kernels.py [--replicates R]

Timings cover the two hot kernels (single-change scan and two-window pair
scan) in batch form, as used by the null-distribution simulators.  The
numba path is warmed up first so JIT compilation is excluded.
"""

import argparse
import time

import numpy as np

from snsplit._kernels import _numba, _numpy


def _time(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--replicates", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<28}{'size':<16}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for M in (200, 1000, 5000):
        Y = rng.standard_normal((args.replicates, M))
        _numba.sn_stat_batch(Y[:2])  # warm-up / compile
        t_np = _time(_numpy.sn_stat_batch, Y)
        t_nb = _time(_numba.sn_stat_batch, Y)
        print(f"{'sn_stat_batch':<28}{f'{args.replicates}x{M}':<16}"
              f"{t_np:>9.3f}s{t_nb:>9.3f}s{t_np / t_nb:>8.1f}x")

    for M in (100, 300, 600):
        R = max(args.replicates // 10, 10)
        Y = rng.standard_normal((R, M))
        l1 = np.arange(2, M - 2, dtype=np.int64)
        l2 = np.arange(4, M, dtype=np.int64)
        _numba.multi_scan_batch(Y[:2], l1, l2)
        t_np = _time(_numpy.multi_scan_batch, Y, l1, l2)
        t_nb = _time(_numba.multi_scan_batch, Y, l1, l2)
        print(f"{'multi_scan_batch':<28}{f'{R}x{M}':<16}"
              f"{t_np:>9.3f}s{t_nb:>9.3f}s{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
