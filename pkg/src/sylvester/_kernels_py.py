"""Pure-Python versions of the inner loops (reference and fallback)."""
from __future__ import annotations

import math

__all__ = ["count_points", "cube_sum_search"]


def count_points(p: int, a1: int, a2: int, a3: int, a4: int, a6: int) -> int:
    """Number of points (including O) of the Weierstrass curve over F_p."""
    if p == 2 or p == 3:
        n = 1
        for x in range(p):
            for y in range(p):
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0:
                    n += 1
        return n
    chi = [0] * p
    for y in range(1, p):
        chi[y * y % p] = 1
    for r in range(1, p):
        chi[r] = 1 if chi[r] else -1
    n = 1 + p
    for x in range(p):
        b = a1 * x + a3
        d = (b * b + 4 * (((x + a2) * x + a4) * x + a6)) % p
        n += chi[d]
    return n


def _icbrt(v: int) -> int:
    """Floor cube root of a signed integer."""
    if v < 0:
        return -_icbrt(-v - 1) - 1 if v != 0 else 0
    r = int(round(v ** (1.0 / 3.0))) if v < 1 << 1000 else 1 << (v.bit_length() // 3)
    while r * r * r > v:
        r -= 1
    while (r + 1) ** 3 <= v:
        r += 1
    return r


def cube_sum_search(n: int, bound: int):
    """First coprime (A, B, C), ordered by C then |A|, with A^3 + B^3 = n C^3, A B != 0."""
    for C in range(1, bound + 1):
        t = n * C ** 3
        for a in range(0, bound + 1):
            for A in ((a, -a) if a else ()):
                rest = t - A ** 3
                B = _icbrt(rest)
                if B ** 3 == rest and B != 0 and abs(B) <= bound and math.gcd(math.gcd(A, B), C) == 1:
                    return (A, B, C) if A >= B else (B, A, C)
    return None
