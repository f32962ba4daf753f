#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python twin.

Times the hot term-map operations on randomized workloads shaped like the
real ones (sparse classes on up to 10 generators, plus the dense rank-8
wedges the acceptance property suite hammers), then reruns the sec5
pipeline under each kernel.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from thomstem import _kernel_py

try:
    from thomstem import _kernel_c
except ImportError:
    _kernel_c = None


def make_workload(rng, count, rank, terms):
    out = []
    for _ in range(count):
        a = {rng.randrange(1 << rank): rng.randint(-9, 9) or 1
             for _ in range(terms)}
        b = {rng.randrange(1 << rank): rng.randint(-9, 9) or 1
             for _ in range(terms)}
        out.append((a, b))
    return out


def time_kernel(kernel, workload, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for a, b in workload:
            kernel.wedge_terms(a, b, 0)
            kernel.wedge_terms(a, b, 2)
            kernel.add_terms(a, b, 0)
        best = min(best, time.perf_counter() - start)
    return best


def time_pipeline(repeat):
    """End-to-end sec5 run under the currently selected backend."""
    from thomstem import pipeline
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        pipeline.run_scenario(pipeline.preset("paper-sec5", det1=3, det2=5))
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(2026)
    workloads = [
        ("sparse rank 10 (4 terms)", make_workload(rng, 4000, 10, 4)),
        ("dense rank 8 (12 terms)", make_workload(rng, 1500, 8, 12)),
        ("dense rank 6 (24 terms)", make_workload(rng, 600, 6, 24)),
    ]

    print(f"{'workload':<28}{'pure':>12}{'compiled':>12}{'speedup':>10}")
    for name, workload in workloads:
        pure = time_kernel(_kernel_py, workload, args.repeat)
        if _kernel_c is None:
            print(f"{name:<28}{pure * 1000:>10.1f}ms{'n/a':>12}{'':>10}")
            continue
        compiled = time_kernel(_kernel_c, workload, args.repeat)
        print(f"{name:<28}{pure * 1000:>10.1f}ms{compiled * 1000:>10.1f}ms"
              f"{pure / compiled:>9.1f}x")

    if _kernel_c is None:
        print("\ncompiled kernel not built; install with the Cython "
              "extension to compare")
        return

    # cross-check on top of the timings: both kernels must agree exactly
    for name, workload in workloads:
        for a, b in workload[:200]:
            assert _kernel_c.wedge_terms(a, b, 0) == \
                _kernel_py.wedge_terms(a, b, 0)
    print("\nagreement check: compiled == pure on sampled workloads")

    import os
    import subprocess
    import sys
    here = time_pipeline(args.repeat)
    env = dict(os.environ, THOMSTEM_PURE="1")
    pure_run = subprocess.run(
        [sys.executable, "-c",
         "import time; from thomstem import pipeline; "
         "t=time.perf_counter(); "
         "pipeline.run_scenario(pipeline.preset('paper-sec5', det1=3, det2=5)); "
         "print(time.perf_counter()-t)"],
        capture_output=True, text=True, env=env, check=True)
    print(f"sec5 pipeline: selected backend {here * 1000:.0f} ms, "
          f"forced pure {float(pure_run.stdout) * 1000:.0f} ms")


if __name__ == "__main__":
    main()
