"""Compiled vs pure-Python relaxation kernel on cascade and random programs.

    python benchmarks/bench_kernels.py [--sizes 10000,20000,40000] [--reps 15]

Prints one line per (workload, size) with both timings, the speedup and the
per-doubling growth of each kernel.
"""

import argparse
import sys

from jmprelax.cli import run_bench
from jmprelax.relax import available_backends
from jmprelax.testgen import GenParams, gen_cascade, gen_random


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10000,20000,40000")
    ap.add_argument("--reps", type=int, default=15)
    args = ap.parse_args(argv)
    if "cython" not in available_backends():
        sys.exit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    sizes = [int(s) for s in args.sizes.split(",")]
    workloads = {
        "cascade": [gen_cascade(n) for n in sizes],
        "random": [gen_random(GenParams(seed=1, jump_count=n, blob_mean=16)) for n in sizes],
    }
    algos = ["linear-cython", "linear-python"]
    print(f"{'workload':8} {'jumps':>7} {'cython ms':>10} {'python ms':>10} {'speedup':>8}")
    for name, programs in workloads.items():
        rows = run_bench(programs, algos, args.reps)
        prev = None
        for n, (c, p) in zip(sizes, zip(rows[0::2], rows[1::2])):
            line = f"{name:8} {n:7d} {c[2] / 1e6:10.3f} {p[2] / 1e6:10.3f} {p[2] / c[2]:8.1f}"
            if prev:
                line += f"   growth x{c[2] / prev[0]:.2f} / x{p[2] / prev[1]:.2f}"
            prev = (c[2], p[2])
            print(line)


if __name__ == "__main__":
    main()
