"""Compare the numba kernels against the pure-numpy fallback.

Run twice to see both backends:

    python3 benchmarks/bench_kernels.py              # numba (default)
    MOTRANS_DISABLE_NUMBA=1 python3 benchmarks/bench_kernels.py

or pass --both to benchmark the two implementations side by side in one
process (numba must be available).
"""

import argparse
import time

import numpy as np

from motrans import kernels, quat


def timeit(fn, *args, repeats=5):
    fn(*args)  # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lbs(V=100_000, K=40, rng=None):
    rng = rng or np.random.default_rng(0)
    verts = rng.normal(size=(V, 3))
    w = rng.uniform(size=(V, K))
    w /= w.sum(axis=1, keepdims=True)
    rots = quat.to_matrix(quat.random_unit(rng, K))
    trans = rng.normal(size=(K, 3))
    return (verts, w, rots, trans)


def bench_kde(n=2000, m=2000, rng=None):
    rng = rng or np.random.default_rng(1)
    return (rng.normal(size=(n, 3)), rng.normal(size=(m, 3)), 0.25)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--both", action="store_true",
                        help="time numba and numpy implementations side by side")
    parser.add_argument("--vertices", type=int, default=100_000)
    parser.add_argument("--parts", type=int, default=40)
    args = parser.parse_args()

    lbs_args = bench_lbs(args.vertices, args.parts)
    kde_args = bench_kde()

    print(f"active backend: {kernels.backend()}")
    print(f"LBS blend ({args.vertices} vertices x {args.parts} parts):")
    if args.both and kernels._HAVE_NUMBA:
        t_nb = timeit(kernels._lbs_blend_numba, *lbs_args)
        t_np = timeit(kernels._lbs_blend_numpy, *lbs_args)
        print(f"  numba: {t_nb * 1e3:8.2f} ms")
        print(f"  numpy: {t_np * 1e3:8.2f} ms   ({t_np / t_nb:.1f}x slower)")
    else:
        t = timeit(kernels.lbs_blend, *lbs_args)
        print(f"  {kernels.backend()}: {t * 1e3:8.2f} ms")

    print("KDE sum (2000 points x 2000 queries):")
    if args.both and kernels._HAVE_NUMBA:
        t_nb = timeit(kernels._kde_sum_numba, *kde_args)
        t_np = timeit(kernels._kde_sum_numpy, *kde_args)
        print(f"  numba: {t_nb * 1e3:8.2f} ms")
        print(f"  numpy: {t_np * 1e3:8.2f} ms   ({t_np / t_nb:.1f}x slower)")
    else:
        t = timeit(kernels.kde_sum, *kde_args)
        print(f"  {kernels.backend()}: {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
