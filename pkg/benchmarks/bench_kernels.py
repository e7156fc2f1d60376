"""Benchmark: compiled bitmask kernels vs the pure-Python twin.

Runs the three hot kernels on synthetic workloads sized well above the
exhaustive-test bounds, so the constant factors matter.  Usage:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import statistics
import time

from mullsem._kernels import pure

try:
    from mullsem._kernels import _core as compiled
except ImportError:
    compiled = None


def timed(fn, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def transversal_workload(rng, nbits=20, edges=14, popcount=6):
    fam = []
    for _ in range(edges):
        mask = 0
        while mask.bit_count() < popcount:
            mask |= 1 << rng.randrange(nbits)
        fam.append(mask)
    return fam, nbits


def minimize_workload(rng, nbits=24, count=20000):
    return [rng.randrange(1 << nbits) for _ in range(count)]


def phase_workload(rng, n=32, queries=4000):
    # cyclic monoid table plus random pole and subsets
    table = [((i + j) % n) for i in range(n) for j in range(n)]
    pole = rng.randrange(1 << n)
    subsets = [rng.randrange(1 << n) for _ in range(queries)]
    return table, n, pole, subsets


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = random.Random(20240817)

    fam, nbits = transversal_workload(rng)
    masks = minimize_workload(rng)
    table, n, pole, subsets = phase_workload(rng)

    workloads = [
        ("minimal_transversals",
         lambda impl: impl.minimal_transversals(fam, nbits)),
        ("minimize_family",
         lambda impl: impl.minimize_family(masks)),
        ("phase_orthogonal",
         lambda impl: [impl.phase_orthogonal(table, n, pole, x)
                       for x in subsets]),
    ]

    print(f"{'kernel':<22}{'pure':>12}{'compiled':>12}{'speedup':>10}")
    for name, run in workloads:
        pure_time = timed(lambda: run(pure), args.repeat)
        if compiled is None:
            print(f"{name:<22}{pure_time * 1e3:>10.1f}ms{'-':>12}{'-':>10}")
            continue
        assert run(compiled) == run(pure), f"{name}: backends disagree"
        fast_time = timed(lambda: run(compiled), args.repeat)
        ratio = pure_time / fast_time if fast_time else float("inf")
        print(f"{name:<22}{pure_time * 1e3:>10.1f}ms"
              f"{fast_time * 1e3:>10.1f}ms{ratio:>9.1f}x")
    if compiled is None:
        print("\ncompiled kernels not built; showing pure timings only")


if __name__ == "__main__":
    main()
