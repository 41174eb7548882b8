"""Timing comparison of the compiled kernels against the numpy fallback.

Runs each hot kernel on synthetic workloads of increasing size and prints
a per-call timing table.  Useful for checking that the compiled extension
actually pays for itself on a given machine.

Usage::

    python3 benchmarks/bench_kernels.py --sizes 1000,10000 --repeats 5
"""

import argparse
import time

import numpy as np

from bergman_orlicz import kernels
from bergman_orlicz.kernels import python_backend


def _time(fn, *args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_atom_sum(rng, n, repeats):
    centers = (rng.uniform(-3, 3, n) + 1j * rng.uniform(0.1, 4, n)).astype(np.complex128)
    coeffs = (rng.normal(size=n) + 1j * rng.normal(size=n)).astype(np.complex128)
    z = (rng.uniform(-4, 4, 256) + 1j * rng.uniform(0.05, 5, 256)).astype(np.complex128)
    args = (z, centers, coeffs, 2.5)
    return (_time(kernels.atom_sum_eval, *args, repeats=repeats),
            _time(python_backend.atom_sum_eval, *args, repeats=repeats))


def bench_min_separation(rng, n, repeats):
    xs = rng.uniform(-10, 10, n)
    ys = rng.uniform(0.1, 8, n)
    radii = rng.uniform(0.01, 0.5, n)
    args = (xs, ys, radii)
    return (_time(kernels.min_separation, *args, repeats=repeats),
            _time(python_backend.min_separation, *args, repeats=repeats))


def bench_cover_counts(rng, n, repeats):
    px = rng.uniform(-5, 5, 2000)
    py = rng.uniform(0.05, 5, 2000)
    cx = rng.uniform(-5, 5, n)
    cy = rng.uniform(0.05, 5, n)
    radii = rng.uniform(0.05, 1.5, n)
    args = (px, py, cx, cy, radii)
    return (_time(kernels.cover_counts, *args, repeats=repeats),
            _time(python_backend.cover_counts, *args, repeats=repeats))


BENCHES = (
    ("atom_sum_eval", bench_atom_sum),
    ("min_separation", bench_min_separation),
    ("cover_counts", bench_cover_counts),
)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="1000,10000",
                        help="comma-separated workload sizes (atoms/disks)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="repeats per measurement; best time wins")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':>16} {'n':>8} {'active (s)':>12} {'python (s)':>12} {'speedup':>9}")
    for name, bench in BENCHES:
        for n in sizes:
            rng = np.random.default_rng(args.seed)
            t_active, t_python = bench(rng, n, args.repeats)
            ratio = t_python / t_active if t_active > 0 else float("inf")
            print(f"{name:>16} {n:>8} {t_active:>12.6f} {t_python:>12.6f} {ratio:>8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
