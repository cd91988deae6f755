"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import timeit

import sympy

from sylvester import _kernels_py

try:
    from sylvester import _kernels
except ImportError:
    _kernels = None

# y^2 + y = x^3 - 7, the minimal model of x^3 + y^3 = 1 twisted by 3p for p = 2
CURVE = (0, 0, 1, 0, -7)


def count_all(mod, bound):
    return [mod.count_points(int(q), *(c % q for c in CURVE)) for q in sympy.primerange(5, bound)]


def cube_all(mod, ns, bound):
    return [mod.cube_sum_search(n, bound) for n in ns]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime-bound", type=int, default=3000)
    ap.add_argument("--search-bound", type=int, default=300)
    args = ap.parse_args()

    ns = [6, 12, 15, 75, 33, 363]
    cases = [
        ("count_points", lambda m: count_all(m, args.prime_bound)),
        ("cube_sum_search", lambda m: cube_all(m, ns, args.search_bound)),
    ]
    print(f"{'kernel':<18}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<18}{tp:>12.3f}{'n/a':>12}{'':>10}")
            continue
        if fn(_kernels) != fn(_kernels_py):
            raise SystemExit(f"{name}: backends disagree")
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:<18}{tp:>12.3f}{tc:>12.3f}{tp / tc:>10.1f}")


if __name__ == "__main__":
    main()
