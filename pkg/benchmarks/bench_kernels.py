#!/usr/bin/env python3
"""Benchmark the compiled coverage kernels against the numpy fallback.

The two hot kernels are the ones hit per candidate evaluation inside the
greedy loop: counting how many not-yet-covered unique node ids appear in a
concatenated index list, and marking a batch of ids covered. Run:

    python3 benchmarks/bench_kernels.py [--sizes 1000,100000] [--repeats 200]
"""

import argparse
import time

import numpy as np

from hial import _kernels_py

try:
    from hial import _ckernels
except ImportError:
    _ckernels = None


def bench(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_case(n, idx_len, repeats, rng):
    covered = (rng.random(n) < 0.3).astype(np.uint8)
    scratch = np.zeros(n, dtype=np.uint8)
    idx = rng.integers(0, n, size=idx_len).astype(np.int64)
    impls = [("python", _kernels_py)]
    if _ckernels is not None:
        impls.append(("cython", _ckernels))

    print(f"\nn={n:>8}  |idx|={idx_len:>8}")
    rows = {}
    for name, impl in impls:
        t_count = bench(impl.count_uncovered_unique,
                        (covered, idx, scratch), repeats)
        t_mark = bench(impl.mark_covered, (covered.copy(), idx), repeats)
        rows[name] = (t_count, t_mark)
        print(f"  {name:<7} count_uncovered_unique {t_count * 1e6:>10.1f} us"
              f"   mark_covered {t_mark * 1e6:>10.1f} us")
    if len(rows) == 2:
        pc, pm = rows["python"]
        cc, cm = rows["cython"]
        print(f"  speedup count {pc / cc:>5.1f}x   mark {pm / cm:>5.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000",
                    help="comma-separated node counts")
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled extension not available; timing fallback only")
    rng = np.random.default_rng(args.seed)
    for n in (int(s) for s in args.sizes.split(",")):
        for frac in (0.1, 1.0, 4.0):
            run_case(n, max(1, int(n * frac)), args.repeats, rng)


if __name__ == "__main__":
    main()
