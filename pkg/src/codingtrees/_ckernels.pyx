# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_kernels_py``."""
from math import gcd as _pygcd

from codingtrees import _kernels_py

cdef long long _SMALL = 1LL << 31


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    while b:
        a, b = b, a % b
    return a


cdef inline long long _floordiv(long long a, long long b) noexcept nogil:
    # b > 0
    cdef long long q = a // b
    if (a % b != 0) and (a < 0):
        q -= 1
    return q


cdef inline long long _mod(long long a, long long n) noexcept nogil:
    cdef long long r = a % n
    if r < 0:
        r += n
    return r


def between_search(an, ad, bn, bd, colour, n):
    if not (-_SMALL < an < _SMALL and 0 < ad < _SMALL
            and -_SMALL < bn < _SMALL and 0 < bd < _SMALL and 0 < n < _SMALL):
        return _kernels_py.between_search(an, ad, bn, bd, colour, n)
    cdef long long can = an, cad = ad, cbn = bn, cbd = bd
    cdef long long cc = colour, cn = n
    cdef long long d, lo, hi, p
    cdef bint found = False
    with nogil:
        d = 1
        while d < _SMALL:
            lo = _floordiv(can * d, cad) + 1
            hi = -_floordiv(-cbn * d, cbd) - 1
            if lo <= hi:
                p = lo + _mod(cc - lo, cn)
                while p <= hi:
                    if _gcd(p, d) == 1:
                        found = True
                        break
                    p += cn
            if found:
                break
            d += 1
    if found:
        return int(p), int(d)
    return _resume(an, ad, bn, bd, colour, n, int(d))


def _resume(an, ad, bn, bd, colour, n, d):
    # past the int64-safe range; finish in Python arithmetic
    while True:
        lo = (an * d) // ad + 1
        hi = -((-bn * d) // bd) - 1
        if lo <= hi:
            p = lo + (colour - lo) % n
            while p <= hi:
                if _pygcd(p, d) == 1:
                    return p, d
                p += n
        d += 1


def lex_compare(a, b):
    cdef Py_ssize_t k, m = min(len(a), len(b))
    for k in range(m):
        x = a[k]
        y = b[k]
        if x != y:
            return -1 if x < y else 1
    return 0


def first_difference(a, b):
    cdef Py_ssize_t k, m = min(len(a), len(b))
    for k in range(m):
        if a[k] != b[k]:
            return k
    return -1
