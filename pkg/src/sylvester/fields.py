"""Exact number fields used throughout the package.

``QOmega`` is the field K = Q(omega), omega = (-1 + sqrt(-3))/2, stored in the
basis (1, omega) with gmpy2 rationals.  ``KummerField`` is a multi-radical
extension K(cbrt(n_1), ..., cbrt(n_k)); its elements are coefficient vectors
over K in the monomial basis prod cbrt(n_i)^{e_i}, 0 <= e_i <= 2.  The
distinguished complex embedding sends omega to exp(2 pi i/3) and every cube
root to its real value.

``Fp2`` is F_p[omega]/(omega^2 + omega + 1), the residue field of K at an
inert prime p (p = 2 or p = 2 mod 3).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
from gmpy2 import mpq, mpz

__all__ = ["QOmega", "KummerField", "KummerElement", "Fp2", "to_mpq", "q_to_mpf", "OMEGA", "SQRT_M3"]


def to_mpq(x) -> mpq:
    if isinstance(x, str):
        return mpq(Fraction(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def q_to_mpf(x):
    """Rational (mpq, mpz, int, Fraction) to an mpmath float at working precision."""
    x = to_mpq(x)
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)


class QOmega:
    """Element a + b*omega of K = Q(sqrt(-3))."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        if isinstance(a, QOmega):
            a, b = a.a, a.b
        self.a = to_mpq(a)
        self.b = to_mpq(b)

    @classmethod
    def from_sqrt_m3(cls, r, s) -> QOmega:
        """r + s*sqrt(-3); sqrt(-3) = 1 + 2*omega."""
        r, s = to_mpq(r), to_mpq(s)
        return cls(r + s, 2 * s)

    def sqrt_m3_parts(self) -> tuple[mpq, mpq]:
        """(r, s) with self = r + s*sqrt(-3)."""
        return self.a - self.b / 2, self.b / 2

    def _coerce(self, other) -> QOmega:
        if isinstance(other, QOmega):
            return other
        if isinstance(other, (int, mpz, mpq, Fraction)):
            return QOmega(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QOmega(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QOmega(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QOmega(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return QOmega(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conj(self) -> QOmega:
        return QOmega(self.a - self.b, -self.b)

    def norm(self) -> mpq:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> QOmega:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(omega)")
        c = self.conj()
        return QOmega(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QOmega(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def denominator(self) -> mpz:
        from math import lcm

        return mpz(lcm(int(self.a.denominator), int(self.b.denominator)))

    def to_complex(self):
        """Image under the fixed embedding, at the current mpmath precision."""
        w = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        return q_to_mpf(self.a) + q_to_mpf(self.b) * w

    def mpf_parts(self):
        r, s = self.sqrt_m3_parts()
        return q_to_mpf(r), q_to_mpf(s) * mpmath.sqrt(3)

    def __repr__(self):
        if self.b == 0:
            return f"QOmega({self.a})"
        return f"QOmega({self.a} + {self.b}*w)"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, data) -> QOmega:
        return cls(data[0], data[1])


OMEGA = QOmega(0, 1)
SQRT_M3 = QOmega(1, 2)


class KummerField:
    """K(cbrt(n_1), ..., cbrt(n_k)) with positive integer radicands."""

    def __init__(self, radicands=()):
        self.radicands = tuple(int(n) for n in radicands)
        for n in self.radicands:
            if n <= 0:
                raise ValueError("radicands must be positive")
        self.k = len(self.radicands)
        self.monomials = list(itertools.product(range(3), repeat=self.k))
        self.index = {e: i for i, e in enumerate(self.monomials)}

    @property
    def degree(self) -> int:
        """Degree over Q (assuming the radicands are multiplicatively independent mod cubes)."""
        return 2 * 3**self.k

    def __eq__(self, other):
        return isinstance(other, KummerField) and self.radicands == other.radicands

    def __hash__(self):
        return hash(self.radicands)

    def __repr__(self):
        return f"KummerField{self.radicands}"

    def __call__(self, value) -> KummerElement:
        if isinstance(value, KummerElement):
            if value.field == self:
                return value
            return self._embed(value)
        coeffs = [QOmega()] * len(self.monomials)
        coeffs[0] = value if isinstance(value, QOmega) else QOmega(value)
        return KummerElement(self, coeffs)

    def _embed(self, value: KummerElement) -> KummerElement:
        pos = []
        for n in value.field.radicands:
            if n not in self.radicands:
                raise ValueError("field mismatch")
            pos.append(self.radicands.index(n))
        coeffs = [QOmega()] * len(self.monomials)
        for e, c in zip(value.field.monomials, value.coeffs):
            big = [0] * self.k
            for i, ei in zip(pos, e):
                big[i] = ei
            coeffs[self.index[tuple(big)]] = c
        return KummerElement(self, coeffs)

    def zero(self) -> KummerElement:
        return self(0)

    def one(self) -> KummerElement:
        return self(1)

    def monomial(self, exps, coeff=1) -> KummerElement:
        coeffs = [QOmega()] * len(self.monomials)
        coeffs[self.index[tuple(exps)]] = coeff if isinstance(coeff, QOmega) else QOmega(coeff)
        return KummerElement(self, coeffs)

    def gen(self, i: int) -> KummerElement:
        e = [0] * self.k
        e[i] = 1
        return self.monomial(e)

    def real_roots(self):
        return [mpmath.cbrt(q_to_mpf(n)) for n in self.radicands]

    def monomial_values(self):
        roots = self.real_roots()
        vals = []
        for e in self.monomials:
            v = mpmath.mpf(1)
            for r, ei in zip(roots, e):
                v *= r**ei
            vals.append(v)
        return vals

    def characters(self):
        """All exponent vectors (a_1..a_k) in (Z/3)^k labelling Gal(self/K)."""
        return list(itertools.product(range(3), repeat=self.k))


class KummerElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: KummerField, coeffs):
        self.field = field
        self.coeffs = list(coeffs)

    def _coerce(self, other):
        if isinstance(other, KummerElement):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (int, mpz, mpq, Fraction, QOmega)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KummerElement(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return KummerElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KummerElement(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, mpz, mpq, Fraction, QOmega)):
            s = other if isinstance(other, QOmega) else QOmega(other)
            return KummerElement(self.field, [a * s for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        F = self.field
        out = [QOmega()] * len(F.monomials)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            ei = F.monomials[i]
            for j, b in enumerate(o.coeffs):
                if b.is_zero():
                    continue
                ej = F.monomials[j]
                scale = 1
                e = []
                for n, x, y in zip(F.radicands, ei, ej):
                    s = x + y
                    if s >= 3:
                        s -= 3
                        scale *= n
                    e.append(s)
                idx = F.index[tuple(e)]
                out[idx] = out[idx] + a * b * scale
        return KummerElement(F, out)

    __rmul__ = __mul__

    def galois(self, chars) -> KummerElement:
        """Apply the automorphism cbrt(n_i) -> omega^{chars[i]} cbrt(n_i)."""
        F = self.field
        powers = [QOmega(1), OMEGA, OMEGA * OMEGA]
        out = []
        for e, c in zip(F.monomials, self.coeffs):
            t = sum(ci * ei for ci, ei in zip(chars, e)) % 3
            out.append(c * powers[t] if t else c)
        return KummerElement(F, out)

    def norm_to_K(self) -> QOmega:
        prod = self.field.one()
        for ch in self.field.characters():
            prod = prod * self.galois(ch)
        c = prod.coeffs
        if any(not x.is_zero() for x in c[1:]):
            raise ArithmeticError("relative norm did not land in K")
        return c[0]

    def inverse(self) -> KummerElement:
        others = self.field.one()
        for ch in self.field.characters()[1:]:
            others = others * self.galois(ch)
        n = (self * others).coeffs[0]
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero in Kummer field")
        return others * n.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, mpz, mpq, Fraction, QOmega)):
            s = other if isinstance(other, QOmega) else QOmega(other)
            return self * s.inverse()
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is NotImplemented:
            return False
        return all(a == b for a, b in zip(self.coeffs, o.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def support(self):
        return [e for e, c in zip(self.field.monomials, self.coeffs) if not c.is_zero()]

    def in_K(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def to_K(self) -> QOmega:
        if not self.in_K():
            raise ValueError("element is not in K")
        return self.coeffs[0]

    def coeff(self, exps) -> QOmega:
        return self.coeffs[self.field.index[tuple(exps)]]

    def to_complex(self):
        vals = self.field.monomial_values()
        return mpmath.fsum(c.to_complex() * v for c, v in zip(self.coeffs, vals) if not c.is_zero())

    def height_bits(self) -> int:
        """Rough size: max bit length of numerators/denominators of the coordinates."""
        best = 0
        for c in self.coeffs:
            for q in (c.a, c.b):
                best = max(best, int(q.numerator).bit_length(), int(q.denominator).bit_length())
        return best

    def __repr__(self):
        terms = [f"{c!r}*{e}" for e, c in zip(self.field.monomials, self.coeffs) if not c.is_zero()]
        return f"<{self.field}: " + (" + ".join(terms) or "0") + ">"

    def to_json(self) -> dict:
        return {
            "radicands": list(self.field.radicands),
            "coords": [c.to_json() for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data) -> KummerElement:
        F = KummerField(data["radicands"])
        return cls(F, [QOmega.from_json(c) for c in data["coords"]])


class Fp2:
    """Element a + b*omega of F_p[omega] (a field for p = 2 or p = 2 mod 3)."""

    __slots__ = ("p", "a", "b")

    def __init__(self, p: int, a=0, b=0):
        self.p = p
        self.a = int(a) % p
        self.b = int(b) % p

    def _coerce(self, other):
        if isinstance(other, Fp2):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, (int, mpz)):
            return Fp2(self.p, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2(self.p, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Fp2(self.p, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2(self.p, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return Fp2(self.p, a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.a * self.b + self.b * self.b) % self.p

    def inverse(self) -> Fp2:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        ni = pow(n, -1, self.p)
        return Fp2(self.p, (self.a - self.b) * ni, -self.b * ni)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Fp2(self.p, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.p, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Fp2({self.p}: {self.a} + {self.b}w)"

    @classmethod
    def from_qomega(cls, p: int, x: QOmega) -> Fp2:
        da, db = int(x.a.denominator), int(x.b.denominator)
        if da % p == 0 or db % p == 0:
            raise ZeroDivisionError("element is not p-integral")
        return cls(p, int(x.a.numerator) * pow(da, -1, p), int(x.b.numerator) * pow(db, -1, p))

    @classmethod
    def elements(cls, p: int):
        for a in range(p):
            for b in range(p):
                yield cls(p, a, b)
