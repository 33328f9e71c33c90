"""Throughput comparison of the exchange kernels, pure Python vs compiled.

Usage: python3 benchmarks/bench_kernels.py [--steps N]

Both lanes consume the identical random stream, so before timing, the
script cross-checks that they produce bit-identical balances on a short
shared workload.
"""

import argparse
import time

import numpy as np

from entrosim import _pure_kernels
from entrosim.rng import Xoshiro256

try:
    from entrosim import _speedups
except ImportError:
    _speedups = None


def make_workload(players=1000, per_agent=100, seed=7):
    balances = np.full(players, per_agent, dtype=np.int64)
    state = np.array(Xoshiro256(seed).getstate(), dtype=np.uint64)
    return balances, state


def cross_check():
    results = []
    lanes = [_pure_kernels] + ([_speedups] if _speedups else [])
    for lane in lanes:
        balances, state = make_workload(players=50, per_agent=10)
        lane.exchange_steps(balances, 1, 20_000, state)
        results.append((balances, state))
    for balances, state in results[1:]:
        assert np.array_equal(balances, results[0][0])
        assert np.array_equal(state, results[0][1])
    return "bit-identical" if len(results) > 1 else "compiled lane not built"


def throughput(lane, steps):
    balances, state = make_workload()
    started = time.perf_counter()
    lane.exchange_steps(balances, 1, steps, state)
    elapsed = time.perf_counter() - started
    return steps / elapsed, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2_000_000,
                        help="exchange steps per timed run (default 2e6)")
    args = parser.parse_args()

    print(f"lane agreement on shared workload: {cross_check()}")
    pure_rate, pure_time = throughput(_pure_kernels, args.steps)
    print(f"pure python : {args.steps:>10,} steps in {pure_time:7.2f} s "
          f"({pure_rate:12,.0f} steps/s)")
    if _speedups is None:
        print("compiled    : not built (pip install -e . rebuilds it)")
        return
    fast_rate, fast_time = throughput(_speedups, args.steps)
    print(f"compiled    : {args.steps:>10,} steps in {fast_time:7.2f} s "
          f"({fast_rate:12,.0f} steps/s)")
    print(f"speedup     : {fast_rate / pure_rate:.1f}x")


if __name__ == "__main__":
    main()
