"""Time the compiled and pure-numpy march kernels on the same problem.

    python benchmarks/bench_march.py --N 512 --L 128 256 512
"""

import argparse
import time

import numpy as np

from subdiff import _kernels
from subdiff.weights import sbd_weights


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, default=512)
    p.add_argument("--L", type=int, nargs="+", default=[128, 256, 512])
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy kernel is available")
    m = args.N - 1
    x = np.arange(1, args.N) / args.N
    u0 = (x > 0.5).astype(float)
    print(f"{'L':>6} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8} {'max diff':>10}")
    for L in args.L:
        tau = 1.0 / L
        w = np.ascontiguousarray(sbd_weights(args.alpha, tau, L).values)
        src = np.zeros((L + 1, m))
        scale = float(args.N) ** 2
        a, _ = _kernels.march_numba(w, tau, scale, u0, src, L)  # warm-up / compile
        b, _ = _kernels.march_numpy(w, tau, scale, u0, src, L)
        t_jit = best_of(lambda: _kernels.march_numba(w, tau, scale, u0, src, L), args.repeat)
        t_np = best_of(lambda: _kernels.march_numpy(w, tau, scale, u0, src, L), args.repeat)
        diff = float(np.max(np.abs(a - b)))
        print(f"{L:>6} {t_jit:>11.4f} {t_np:>11.4f} {t_np / t_jit:>8.1f} {diff:>10.1e}")


if __name__ == "__main__":
    main()
