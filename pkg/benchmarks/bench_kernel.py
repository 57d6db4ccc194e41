"""Compare the compiled and pure-Python polynomial product kernels.

    python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import time
from fractions import Fraction

from cubicforms import kernel
from cubicforms.invariants import _derived_all, discrepancy_report
from cubicforms.polyalg import MultiPoly
from cubicforms.transforms import run_suite, symbolic_theorem43


def dense_product():
    xs = [MultiPoly.var(f"a{i}") for i in range(6)]
    p = sum((x * (i + 1) for i, x in enumerate(xs)), MultiPoly.const(1))
    q = sum((x * Fraction(1, i + 2) for i, x in enumerate(xs)), MultiPoly.const(-1))
    return (p**4) * (q**4)


def big_coefficients():
    x, y = MultiPoly.var("x"), MultiPoly.var("y")
    p = (x * 10**20 + y * 3**40 + 7) ** 12
    return p * p


def symbolic_identity():
    _derived_all.cache_clear()
    return symbolic_theorem43()


def report():
    _derived_all.cache_clear()
    return discrepancy_report()


def numeric_trials():
    _derived_all.cache_clear()
    return run_suite(3, seed=0)


CASES = [
    ("dense product, 6 vars", dense_product),
    ("big coefficients", big_coefficients),
    ("symbolic composition identity", symbolic_identity),
    ("discrepancy report", report),
    ("3 random trials, all laws", numeric_trials),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    compiled = kernel.compiled_mul_terms()
    backends = [("python", kernel.python_mul_terms)]
    if compiled is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
    else:
        backends.append(("cython", compiled))

    original = kernel.mul_terms
    print(f"{'case':<34}" + "".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    try:
        for label, fn in CASES:
            row = []
            for _, impl in backends:
                kernel.mul_terms = impl
                row.append(best_of(fn, args.repeat))
            speedup = f"{row[0] / row[1]:8.1f}x" if len(row) == 2 else ""
            print(f"{label:<34}" + "".join(f"{t:9.3f}s" for t in row) + "  " + speedup)
    finally:
        kernel.mul_terms = original


if __name__ == "__main__":
    main()
