# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loops: point counting over F_p and the cube-sum search."""
from libc.math cimport cbrt, llround
from libc.stdlib cimport malloc, free


def count_points(long p, long a1, long a2, long a3, long a4, long a6):
    cdef long x, y, b, d, n
    cdef signed char *chi
    if p == 2 or p == 3:
        n = 1
        for x in range(p):
            for y in range(p):
                if (y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) % p == 0:
                    n += 1
        return n
    a1 %= p; a2 %= p; a3 %= p; a4 %= p; a6 %= p
    chi = <signed char *> malloc(p)
    if chi == NULL:
        raise MemoryError()
    try:
        for x in range(p):
            chi[x] = -1
        chi[0] = 0
        for y in range(1, p):
            chi[(y * y) % p] = 1
        n = 1 + p
        for x in range(p):
            b = (a1 * x + a3) % p
            d = (((x + a2) % p * x + a4) % p * x + a6) % p
            d = (b * b + 4 * d) % p
            n += chi[d]
        return n
    finally:
        free(chi)


cdef inline long _gcd(long a, long b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def cube_sum_search(long n, long bound):
    """First coprime (A, B, C), ordered by C then |A|, with A^3 + B^3 = n C^3, A B != 0.

    Uses 64-bit arithmetic with long double cube roots; valid while n*bound^3 < 2^62.
    """
    cdef long C, a, A, B, s, k
    cdef long long t, rest
    if n * bound * bound * bound >= (1 << 62) // 2:
        from ._kernels_py import cube_sum_search as slow
        return slow(n, bound)
    for C in range(1, bound + 1):
        t = <long long> n * C * C * C
        for a in range(1, bound + 1):
            for s in range(2):
                A = a if s == 0 else -a
                rest = t - <long long> A * A * A
                B = <long> llround(cbrt(<double> rest))
                for k in range(-1, 2):
                    if <long long> (B + k) * (B + k) * (B + k) == rest and B + k != 0 and abs(B + k) <= bound:
                        if _gcd(_gcd(A, B + k), C) == 1:
                            if A >= B + k:
                                return (A, B + k, C)
                            return (B + k, A, C)
    return None
