import os
import random
import subprocess
import sys
from fractions import Fraction as F

import pytest

from codingtrees import _kernels_py as pure
from codingtrees import kernels
from codingtrees.points import TOP

ck = pytest.importorskip("codingtrees._ckernels", reason="compiled kernels not built")


def _intervals(rng, count, big=False):
    for _ in range(count):
        scale = 10**12 if big else 50
        a = F(rng.randint(-scale, scale), rng.randint(1, scale))
        b = a + F(1, rng.randint(1, 10**6 if big else 500))
        n = rng.randint(1, 5)
        yield a, b, rng.randrange(n), n


def test_between_search_agrees():
    rng = random.Random(0)
    for a, b, c, n in _intervals(rng, 5000):
        args = (a.numerator, a.denominator, b.numerator, b.denominator, c, n)
        assert ck.between_search(*args) == pure.between_search(*args)


def test_between_search_agrees_on_big_operands():
    rng = random.Random(1)
    for a, b, c, n in _intervals(rng, 300, big=True):
        args = (a.numerator, a.denominator, b.numerator, b.denominator, c, n)
        assert ck.between_search(*args) == pure.between_search(*args)


def test_lex_compare_and_first_difference_agree():
    rng = random.Random(2)
    pool = [0, 1, -1, F(1, 2), F(-3, 7), TOP, 10**30]
    for _ in range(5000):
        k = rng.randint(0, 4)
        a = tuple(rng.choice(pool) for _ in range(k))
        b = tuple(rng.choice(pool) if rng.random() < 0.5 else x for x in a)
        assert ck.lex_compare(a, b) == pure.lex_compare(a, b)
        assert ck.first_difference(a, b) == pure.first_difference(a, b)


def test_backend_selection():
    forced = os.environ.get("CODINGTREES_PURE", "") not in ("", "0")
    assert kernels.BACKEND == ("python" if forced else "cython")
    env = dict(os.environ, CODINGTREES_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from codingtrees import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
