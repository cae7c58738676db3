#!/usr/bin/env python3
"""Benchmark the compiled quadrature kernels against the pure-Python twin.

The hot loop of the package is the per-grid-point adaptive Simpson
convolution that builds scalar potentials and gauge fields; this script
times it for each profile kind over a few grid sizes and prints the
speedup.  Run after an editable install:

    python3 benchmarks/bench_kernels.py [--sizes 500,2000,8000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from zml._kernels import available_backends, get_backend
from zml.profiles import box, bump, truncated_gaussian

PROFILES = {
    "box": box(1.0, 2.0),
    "truncated-gaussian": truncated_gaussian(1.0, 1.0, 3.0),
    "bump": bump(2.0, 2.0),
}


def time_convolve(backend, profile, n, repeats, fn_name):
    fn = getattr(backend, fn_name)
    kid = profile.kernel_id
    kp = np.asarray(profile.kernel_params)
    lo, hi = profile.support
    seeds = np.asarray(profile.seeds, dtype=float)
    xs = np.linspace(lo - 15.0, hi + 15.0, n)
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(kid, kp, lo, hi, seeds, xs, 1e-10)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,8000",
                        help="comma-separated grid sizes")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing the pure-Python kernels only")

    header = f"{'kernel':14s} {'profile':20s} {'n':>7s}"
    for name in backends:
        header += f" {name + ' [s]':>12s}"
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))

    for fn_name in ("convolve_abs", "convolve_sign"):
        for pname, profile in PROFILES.items():
            for n in sizes:
                times = {}
                results = {}
                for bname in backends:
                    times[bname], results[bname] = time_convolve(
                        get_backend(bname), profile, n, args.repeats, fn_name)
                row = f"{fn_name:14s} {pname:20s} {n:7d}"
                for bname in backends:
                    row += f" {times[bname]:12.4f}"
                if len(backends) == 2:
                    row += f" {times['python'] / times['cython']:8.1f}x"
                    err = np.max(np.abs(results["python"] - results["cython"]))
                    assert err < 1e-12, f"backend mismatch {err:.2e}"
                print(row)


if __name__ == "__main__":
    main()
