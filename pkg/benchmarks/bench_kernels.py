"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each row reports the best of N runs per backend after one warm-up call
(the warm-up absorbs JIT compilation).
"""

import argparse
import time

import numpy as np

from kperf import kernels
from kperf._accel import HAVE_NUMBA
from kperf.perfection import units_group


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    p, m = 7, 6
    X = rng.integers(0, p, (200_000, m))
    Y = rng.integers(0, p, (200_000, m))
    yield "poly_mul 200k x deg 6 mod 7", lambda b: kernels.poly_mul(X, Y, p, backend=b)
    yield "poly_pow e=343 on 20k", lambda b: kernels.poly_pow(X[:20_000], 343, p, backend=b)
    yield "encode/decode 200k", lambda b: kernels.decode(kernels.encode(X, p, backend=b), p, m, backend=b)
    moduli = np.array([8, 9, 25], dtype=np.int64)
    T = np.array([[2, 0, 0], [1, 3, 0], [0, 0, 5]], dtype=np.int64)
    X0 = np.stack([rng.integers(0, n, 50_000) for n in moduli], axis=1)
    yield "first_zero_hits 50k orbits", lambda b: kernels.first_zero_hits(T, moduli, X0, 1800, backend=b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
    print(f"{'case':34s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, fn in cases():
        tn = best_of(lambda: fn("numpy"), args.repeat)
        if HAVE_NUMBA:
            tj = best_of(lambda: fn("numba"), args.repeat)
            print(f"{name:34s} {tn:10.4f} {tj:10.4f} {tn / tj:8.1f}x")
        else:
            print(f"{name:34s} {tn:10.4f} {'-':>10s} {'-':>8s}")
    # end-to-end: unit group of F_5[t]/t^6 (15625 elements)
    t0 = time.perf_counter()
    G = units_group(5, 6)
    print(f"units_group(5, 6) end to end: {time.perf_counter() - t0:.3f}s, structure {G.group.describe()}")


if __name__ == "__main__":
    main()
