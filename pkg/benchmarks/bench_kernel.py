"""Time the compiled and pure-Python sampling kernels on the same workload.

    python3 benchmarks/bench_kernel.py [--trials 20] [--N 40]
"""

from __future__ import annotations

import argparse
import time

from tileasm.builder import build_counter, build_square, derive_parameters
from tileasm.dynamics import available_kernels, sample_raw
from tileasm.montecarlo import trial_rng


def time_kernel(tas, kernel: str, trials: int, step_cap: int) -> tuple[float, int]:
    tiles = 0
    start = time.perf_counter()
    for i in range(trials):
        xs, _, _, _ = sample_raw(tas, trial_rng(0, i), step_cap, kernel)
        tiles += len(xs)
    return time.perf_counter() - start, tiles


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--N", type=int, default=40)
    ap.add_argument("--square", type=int, default=100, help="side of the square workload (0 to skip)")
    args = ap.parse_args()

    workloads = [(f"counter N={args.N}", build_counter(derive_parameters(args.N, "1/2")).tas)]
    if args.square:
        workloads.append((f"square N={args.square}", build_square(args.square, "1/2").tas))

    kernels = available_kernels()
    print(f"kernels: {', '.join(kernels)}")
    for label, tas in workloads:
        results = {}
        for k in kernels:
            secs, tiles = time_kernel(tas, k, args.trials, 10_000_000)
            results[k] = secs
            print(f"{label:>16}  {k:>7}  {secs:8.3f} s  {tiles / secs:12.0f} tiles/s")
        if len(results) == 2:
            print(f"{label:>16}  speedup {results['python'] / results['cython']:.1f}x")


if __name__ == "__main__":
    main()
