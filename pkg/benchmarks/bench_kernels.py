"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit
from fractions import Fraction

from codingtrees import _kernels_py as pure

try:
    from codingtrees import _ckernels as compiled
except ImportError:
    compiled = None


def between_cases(rng, count):
    out = []
    for _ in range(count):
        a = Fraction(rng.randint(-1000, 1000), rng.randint(1, 50))
        b = a + Fraction(1, rng.randint(100, 5000))
        n = rng.randint(1, 4)
        out.append((a.numerator, a.denominator, b.numerator, b.denominator, rng.randrange(n), n))
    return out


def compare_cases(rng, count):
    out = []
    for _ in range(count):
        a = tuple(rng.randint(-5, 5) for _ in range(6))
        b = a[:rng.randint(0, 5)] + tuple(rng.randint(-5, 5) for _ in range(6))
        out.append((a, b[:6]))
    return out


def run(label, mod, cases, fn_name, repeat):
    fn = getattr(mod, fn_name)

    def body():
        for args in cases:
            fn(*args)

    best = min(timeit.repeat(body, number=1, repeat=repeat))
    print(f"{fn_name:16s} {label:8s} {best * 1e6 / len(cases):9.2f} us/call")
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--count", type=int, default=2000)
    args = ap.parse_args()
    rng = random.Random(0)
    suites = [("between_search", between_cases(rng, args.count)),
              ("lex_compare", compare_cases(rng, args.count)),
              ("first_difference", compare_cases(rng, args.count))]
    for name, cases in suites:
        t_py = run("python", pure, cases, name, args.repeat)
        if compiled is None:
            print(f"{name:16s} cython   (extension not built)")
            continue
        t_c = run("cython", compiled, cases, name, args.repeat)
        print(f"{name:16s} speedup  {t_py / t_c:9.1f}x")


if __name__ == "__main__":
    main()
