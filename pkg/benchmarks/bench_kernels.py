"""Compare the compiled enumeration kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--nbits N] [--masks K] [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import time

from qreliab import _purecount

try:
    from qreliab import _fastcount
except ImportError:
    _fastcount = None


def bench(fn, nbits: int, masks: list[int], repeat: int) -> tuple[float, int]:
    best = float("inf")
    result = 0
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(nbits, masks)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nbits", type=int, default=24)
    parser.add_argument("--masks", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(20240824)
    masks = [
        rng.getrandbits(args.nbits) | (1 << rng.randrange(args.nbits))
        for _ in range(args.masks)
    ]

    pure_time, pure_result = bench(
        _purecount.count_containing_any, args.nbits, masks, args.repeat
    )
    print(f"pure python : {pure_time:8.3f} s  result={pure_result}")
    if _fastcount is None:
        print("compiled    : extension not built")
        return
    fast_time, fast_result = bench(
        _fastcount.count_containing_any, args.nbits, masks, args.repeat
    )
    assert fast_result == pure_result
    print(f"compiled    : {fast_time:8.3f} s  result={fast_result}")
    print(f"speedup     : {pure_time / fast_time:8.1f}x")


if __name__ == "__main__":
    main()
