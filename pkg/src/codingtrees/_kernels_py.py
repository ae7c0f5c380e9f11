"""Pure-Python versions of the hot loops.

Kept behaviourally identical to ``_ckernels.pyx``; the compiled module is
preferred at import time when it is available (see ``kernels``).
"""
from math import gcd


def between_search(an, ad, bn, bd, colour, n):
    """Smallest-denominator, then smallest-numerator, fraction p/d in lowest
    terms with an/ad < p/d < bn/bd and p mod n == colour.

    Denominators must be positive and the interval non-empty; the caller
    checks both.  Returns ``(p, d)``.
    """
    d = 1
    while True:
        lo = (an * d) // ad + 1
        hi = -((-bn * d) // bd) - 1
        if lo <= hi:
            p = lo + (colour - lo) % n
            while p <= hi:
                # a non-reduced p/d was already visited at a smaller denominator
                if gcd(p, d) == 1:
                    return p, d
                p += n
        d += 1


def lex_compare(a, b):
    """-1, 0 or 1 comparing two equal-length value sequences lexicographically."""
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def first_difference(a, b):
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return k
    return -1
