"""Time the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py
The active backend for the package itself is selected at import time by the
CORNERLAB_NUMBA environment variable (0 forces numpy); this script always
times both implementations directly.
"""

import time

import numpy as np

from cornerlab import _kernels


def timeit(fn, *args, repeat=7):
    fn(*args)                      # warm up (JIT compilation for numba)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_polar_laplacian(n_r=1600, n_phi=512):
    r = np.exp(np.linspace(-13.8, 0.0, n_r))
    vals = np.random.default_rng(0).standard_normal((n_r, n_phi))
    dphi = 4.712 / (n_phi - 1)
    rows = [("polar_laplacian numpy", timeit(_kernels._polar_laplacian_np, vals, r, dphi))]
    if _kernels.HAS_NUMBA:
        vals_c = np.ascontiguousarray(vals)
        rows.append(("polar_laplacian numba",
                     timeit(_kernels._polar_laplacian_nb, vals_c, r, dphi)))
    return rows


def bench_exp_scan(n=200_000):
    p = np.random.default_rng(1).standard_normal(n)
    rows = [("exp_scan numpy(lfilter)", timeit(_kernels._exp_scan_np, p, 0.97))]
    if _kernels.HAS_NUMBA:
        rows.append(("exp_scan numba", timeit(_kernels._exp_scan_nb,
                                              np.ascontiguousarray(p), 0.97)))
    return rows


def bench_smoothstep(n=2_000_000):
    s = np.random.default_rng(2).random(n)
    rows = [("smoothstep numpy", timeit(_kernels._smoothstep_np, s, 1))]
    if _kernels.HAS_NUMBA:
        rows.append(("smoothstep numba", timeit(_kernels._smoothstep_nb,
                                                np.ascontiguousarray(s), 1)))
    return rows


def main():
    print(f"numba available: {_kernels.HAS_NUMBA}; package backend: {_kernels.backend()}")
    all_rows = bench_polar_laplacian() + bench_exp_scan() + bench_smoothstep()
    width = max(len(name) for name, _ in all_rows)
    base = {}
    for name, seconds in all_rows:
        kernel = name.split()[0]
        base.setdefault(kernel, seconds)
        speedup = base[kernel] / seconds
        print(f"{name:<{width}}  {seconds * 1e3:9.3f} ms   x{speedup:5.2f}")


if __name__ == "__main__":
    main()
