"""Compare the compiled and pure-Python invariant-factor kernels.

    python benchmarks/bench_snf.py [--size 6] [--count 2000] [--seed 1]
"""

import argparse
import random
import timeit

from chainfill.exactalg import snf


def _matrices(size, count, seed):
    rng = random.Random(seed)
    return [[[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
            for _ in range(count)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=6)
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    mats = _matrices(args.size, args.count, args.seed)
    kernels = {"python": snf.invariant_factors_python}
    if snf.KERNEL == "cython":
        kernels["cython"] = snf.invariant_factors_compiled
        for M in mats:
            assert kernels["cython"](M) == kernels["python"](M)

    best = {}
    for name, fn in kernels.items():
        t = min(timeit.repeat(lambda: [fn(M) for M in mats], number=1, repeat=args.repeat))
        best[name] = t
        print(f"{name:7s} {1e6 * t / len(mats):9.2f} us/matrix  ({args.size}x{args.size})")
    if "cython" in best:
        print(f"speedup {best['python'] / best['cython']:.1f}x")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
