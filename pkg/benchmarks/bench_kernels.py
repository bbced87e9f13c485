"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Run with LORENTZ_MANNHEIM_NUMBA=0 to see the numba table fall back to plain
python loops (the numpy column is unaffected).
"""
import argparse
import time

import numpy as np

from lorentz_mannheim import kernels, lorentz
from lorentz_mannheim._accel import HAVE_NUMBA


def _best(fn, args, repeat):
    fn(*args)  # warm up / compile
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(n, rng):
    g = lorentz.metric()
    u = rng.standard_normal((n, 3))
    v = rng.standard_normal((n, 3))
    h = 1e-3
    y = np.sin(np.arange(n)[:, None] * h * np.array([1.0, 2.0, 3.0]))
    a = np.sort(rng.uniform(0, 1, n))
    b = a + 1e-3
    f = [np.cos(x) for x in (a, 0.75 * a + 0.25 * b, 0.5 * (a + b), 0.25 * a + 0.75 * b, b)]
    return {
        "mdot": (u, v, g),
        "mcross": (u, v, g),
        "grid_derivative": (y, h, 3),
        "simpson_panels": (*f, a, b),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"numba enabled: {HAVE_NUMBA}  n={args.n}")
    print(f"{'kernel':<16} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  max|diff|")
    for name, a in cases(args.n, rng).items():
        tn = _best(kernels.numpy_impl[name], a, args.repeat)
        tb = _best(kernels.numba_impl[name], a, args.repeat)
        rn = kernels.numpy_impl[name](*a)
        rb = kernels.numba_impl[name](*a)
        rn, rb = (np.concatenate([np.ravel(x) for x in r]) if isinstance(r, tuple) else r
                  for r in (rn, rb))
        diff = np.nanmax(np.abs(rn - rb))
        print(f"{name:<16} {tn * 1e3:11.3f} {tb * 1e3:11.3f} {tn / tb:8.2f}  {diff:.2e}")


if __name__ == "__main__":
    main()
