"""Reduction of elements of K(cbrt(3), cbrt(p)) at the primes above an inert p.

The prime p (p = 2 or p = 2 mod 3) is inert in K.  It splits into three primes
in K(cbrt 3), one for each cube root of 3 in F_{p^2}, and each of those is
totally ramified in K(cbrt 3, cbrt p) with cbrt(p) as a uniformizer.  Elements
are reduced by lifting the chosen cube root of 3 p-adically, which handles
coordinates with p in their denominators.
"""
from __future__ import annotations

from gmpy2 import mpq

from .fields import Fp2, KummerElement, KummerField, QOmega, to_mpq

__all__ = ["NonIntegralError", "ResidueMap", "cube_roots_of_3"]


class NonIntegralError(ArithmeticError):
    """Raised when an element is not integral at the chosen prime."""


def _vp(q, p: int) -> int:
    q = to_mpq(q)
    if q == 0:
        return 10**9
    num, den = int(q.numerator), int(q.denominator)
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


class _ZpOmega:
    """Arithmetic in (Z/p^m)[omega]."""

    def __init__(self, p: int, m: int):
        self.p, self.m, self.mod = p, m, p**m

    def mul(self, x, y):
        a, b = x
        c, d = y
        return ((a * c - b * d) % self.mod, (a * d + b * c - b * d) % self.mod)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.mod, (x[1] + y[1]) % self.mod)

    def inv(self, x):
        a, b = x
        n = (a * a - a * b + b * b) % self.mod
        ni = pow(n, -1, self.mod)
        return (((a - b) * ni) % self.mod, (-b * ni) % self.mod)

    def from_q(self, c: QOmega):
        out = []
        for v in (c.a, c.b):
            num, den = int(v.numerator), int(v.denominator)
            if den % self.p == 0:
                raise NonIntegralError("coefficient not p-integral")
            out.append((num * pow(den, -1, self.mod)) % self.mod)
        return tuple(out)


def cube_roots_of_3(p: int) -> list[Fp2]:
    """The three cube roots of 3 in F_{p^2}, in a fixed order."""
    return sorted((x for x in Fp2.elements(p) if x * x * x == Fp2(p, 3, 0)), key=lambda t: (t.a, t.b))


class ResidueMap:
    """Reduction modulo the prime above p in which cbrt(3) maps to roots[index]."""

    def __init__(self, p: int, field: KummerField, index: int):
        if p == 3 or (p != 2 and p % 3 != 2):
            raise ValueError("p must be 2 or congruent to 2 mod 3")
        self.p = p
        self.field = field
        self.index = index
        roots = cube_roots_of_3(p)
        if len(roots) != 3:
            raise AssertionError("3 should have three cube roots in F_{p^2}")
        self.root = roots[index]
        rads = field.radicands
        self.i3 = rads.index(3) if 3 in rads else None
        self.ip = rads.index(p) if p in rads else None
        if set(rads) - {3, p}:
            raise ValueError("field radicands must be among 3 and p")
        self._lifts = {}

    def _lift(self, m: int):
        if m not in self._lifts:
            R = _ZpOmega(self.p, m)
            r = (self.root.a, self.root.b)
            for _ in range(m.bit_length() + 2):
                r2 = R.mul(r, r)
                r3 = R.mul(r2, r)
                f = R.add(r3, (-3 % R.mod, 0))
                df = R.mul((3, 0), r2)
                step = R.mul(f, R.inv(df))
                r = ((r[0] - step[0]) % R.mod, (r[1] - step[1]) % R.mod)
            self._lifts[m] = (R, r)
        return self._lifts[m]

    def _parts(self, x: KummerElement):
        """Split x = sum_j a_j cbrt(p)^j with a_j given as {i: coeff} over cbrt(3)^i."""
        parts = {0: {}, 1: {}, 2: {}}
        for e, c in zip(x.field.monomials, x.coeffs):
            if c.is_zero():
                continue
            i = e[self.i3] if self.i3 is not None else 0
            j = e[self.ip] if self.ip is not None else 0
            parts[j][i] = c
        return parts

    def _value(self, coeffs: dict, m: int):
        """Evaluate sum c_i r^i in (Z/p^m)[omega] after scaling by p^k; returns (k, value)."""
        if not coeffs:
            return None
        k = max(max(0, -_vp(c.a, self.p)) if c.a else 0 for c in coeffs.values())
        k = max([k] + [max(0, -_vp(c.b, self.p)) if c.b else 0 for c in coeffs.values()])
        R, r = self._lift(m + k)
        scale = mpq(self.p) ** k
        acc = (0, 0)
        rp = (1, 0)
        for i in range(3):
            if i in coeffs:
                acc = R.add(acc, R.mul(R.from_q(coeffs[i] * scale), rp))
            rp = R.mul(rp, r)
        return k, acc, R

    def valuation_part(self, coeffs: dict, bound: int = 64) -> int:
        """Valuation at the prime of K(cbrt 3) of sum c_i cbrt(3)^i (>= bound means 'large')."""
        if not coeffs:
            return 10**9
        for extra in range(bound):
            k, val, R = self._value(coeffs, extra + 1)
            mod = self.p ** (extra + 1 + k)
            # val is b mod p^(extra+1+k); b has valuation >= extra+1+k iff val == 0
            if val[0] % mod or val[1] % mod:
                # find exact valuation of b
                v = 0
                while val[0] % self.p ** (v + 1) == 0 and val[1] % self.p ** (v + 1) == 0:
                    v += 1
                return v - k
        return bound

    def __call__(self, x) -> Fp2:
        if isinstance(x, QOmega):
            x = self.field(x)
        parts = self._parts(x)
        for j in (1, 2):
            if parts[j] and self.valuation_part(parts[j]) < 0:
                raise NonIntegralError("element is not integral at the chosen prime")
        if not parts[0]:
            return Fp2(self.p, 0, 0)
        v = self.valuation_part(parts[0])
        if v < 0:
            raise NonIntegralError("element is not integral at the chosen prime")
        k, val, R = self._value(parts[0], 1)
        pk = self.p**k
        a, b = val
        if a % pk or b % pk:
            raise AssertionError("inconsistent valuation")
        return Fp2(self.p, (a // pk) % self.p, (b // pk) % self.p)

    def valuation(self, x) -> mpq:
        """Valuation normalized so that v(p) = 1 (fractions of 1/3 from cbrt p)."""
        if isinstance(x, QOmega):
            x = self.field(x)
        parts = self._parts(x)
        vals = []
        for j in (0, 1, 2):
            if parts[j]:
                vals.append(mpq(self.valuation_part(parts[j])) + mpq(j, 3))
        return min(vals) if vals else mpq(10**9)
