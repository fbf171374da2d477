"""Benchmark the GF(p) determinant kernel: numba JIT vs pure-numpy fallback.

The per-prime determinant is the hot loop of every resultant and
eigendiscriminant evaluation, so this is the comparison that matters.
Run as:

    python benchmarks/bench_det.py [--sizes 45,120,455] [--repeat 3]

Setting EIGENDISC_NO_NUMBA=1 makes the whole package use the fallback;
here both paths are invoked explicitly and cross-checked for equality.
"""

import argparse
import random
import time

import numpy as np

from eigendisc import kernels
from eigendisc.primefield import primes_below, word_primes

PRIMES = {
    "31-bit": word_primes(1)[0],
    "60-bit": primes_below(1 << 60, 1)[0],
}


def bench(fn, arr, p, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(arr, p)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="45,120,200,455")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(0)

    if kernels.USE_NUMBA:
        # warm the JIT outside the timed region
        kernels.det_mod([[1, 2], [3, 4]], PRIMES["31-bit"])
        kernels.det_mod([[1, 2], [3, 4]], PRIMES["60-bit"])
    else:
        print("note: numba unavailable or disabled; both columns use the fallback")

    print(f"{'size':>6} {'prime':>8} {'numba (s)':>12} {'numpy (s)':>12} {'speedup':>9}  equal")
    for n in sizes:
        rows = [[rng.randrange(-10**6, 10**6) for _ in range(n)] for _ in range(n)]
        arr = np.asarray(rows, dtype=np.int64)
        for label, p in PRIMES.items():
            v1, t1 = bench(kernels.det_mod, arr, p, args.repeat)
            v2, t2 = bench(kernels.det_mod_numpy, arr, p, args.repeat)
            speed = t2 / t1 if t1 > 0 else float("inf")
            print(f"{n:>6} {label:>8} {t1:>12.4f} {t2:>12.4f} {speed:>8.1f}x  {v1 == v2}")


if __name__ == "__main__":
    main()
