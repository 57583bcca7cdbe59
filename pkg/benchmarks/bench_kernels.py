"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--n 256] [--repeat 5] [--threads N]

Each kernel is run once to trigger compilation, then timed ``repeat`` times;
the best wall time is reported along with the max abs difference between the
two backends' outputs.
"""
import argparse
import time

import numpy as np

from phasequant import _kernels


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _cases(n, rng):
    def crand(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    coef = crand(n, n)
    phase = crand(n, n)
    shift = np.arange(n, dtype=np.int64) - n // 2
    u2, v2 = crand(2 * n), crand(2 * n)
    nl = min(n, 64)  # the literal oracle is O(n^3); keep it short
    refine = 8
    ur, vr = crand(nl * refine), crand(nl * refine)
    w = 2 * np.pi * (np.arange(nl) - nl // 2) / nl
    return {
        "assemble_shifts": (
            lambda: _kernels.assemble_shifts_numpy(coef, phase, shift),
            lambda: _kernels.assemble_shifts_numba(coef, phase, shift),
        ),
        "lag_products": (
            lambda: _kernels.lag_products_numpy(u2, v2, n),
            lambda: _kernels.lag_products_numba(u2, v2, n),
        ),
        f"literal_tau_wigner (n={nl})": (
            lambda: _kernels.literal_tau_wigner_numpy(ur, vr, nl, refine, 3, 8, w),
            lambda: _kernels.literal_tau_wigner_numba(ur, vr, nl, refine, 3, 8, w),
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int)
    args = ap.parse_args(argv)
    if args.threads:
        _kernels.set_threads(args.threads)
    if not _kernels.HAS_NUMBA:
        print("numba is not importable; only the numpy backend can run")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'max|diff|':>10s}")
    for name, (f_np, f_nb) in _cases(args.n, rng).items():
        diff = float(np.max(np.abs(f_np() - f_nb())))  # also warms up the jit
        t_np = _best(f_np, args.repeat)
        t_nb = _best(f_nb, args.repeat)
        print(f"{name:32s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:8.2f} {diff:10.2e}")


if __name__ == "__main__":
    main()
