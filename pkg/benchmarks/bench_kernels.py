"""Benchmark the numba sweep kernel against the pure-numpy fallback.

Runs exhaustive fault sweeps for a range of network sizes on both engines
and prints wall times and the speedup.  The numba engine is warmed up once
so JIT compilation is not charged to the measurement.

    python benchmarks/bench_kernels.py --k 5..9 --faults 2
    python benchmarks/bench_kernels.py --k 8..9 --faults 3   # the heavy cells
"""

import argparse
import math
import time

from gaussnet import _kernels
from gaussnet.core import node_count
from gaussnet.simulator import sweep


def parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = map(int, text.split("..", 1))
        return list(range(lo, hi + 1))
    return [int(text)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", default="5..9", help="range of network sizes")
    parser.add_argument("--faults", type=int, default=2, choices=(1, 2, 3))
    args = parser.parse_args()

    ks = parse_range(args.k)
    engines = ["numpy"]
    if _kernels.HAVE_NUMBA:
        engines.insert(0, "numba")
        sweep(2, 1, engine="numba")  # JIT warm-up
    else:
        print("numba unavailable; timing the numpy engine only")

    header = f"{'k':>3} {'nodes':>6} {'runs':>9}" + "".join(
        f" {e + ' (s)':>11}" for e in engines
    )
    if len(engines) == 2:
        header += f" {'speedup':>9}"
    print(header)

    for k in ks:
        runs = math.comb(node_count(k) - 1, args.faults)
        times = {}
        stats = {}
        for engine in engines:
            t0 = time.perf_counter()
            stats[engine] = sweep(k, args.faults, engine=engine)
            times[engine] = time.perf_counter() - t0
        if len(engines) == 2:
            assert stats["numba"].avg_max == stats["numpy"].avg_max
            assert stats["numba"].max_max == stats["numpy"].max_max
        row = f"{k:>3} {node_count(k):>6} {runs:>9}" + "".join(
            f" {times[e]:>11.3f}" for e in engines
        )
        if len(engines) == 2:
            row += f" {times['numpy'] / times['numba']:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
