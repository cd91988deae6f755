"""Weierstrass curves over exact fields, C and F_{p^2}, with the Mordell family
E_n : y^2 = x^3 - 432 n^2 as the main citizens.

Coordinates are duck-typed: anything supporting + - * / and an ``is_zero``
test (QOmega, KummerElement, Fp2, gmpy2 rationals) or mpmath complex numbers,
for which zero means "below the tolerance of the working precision".
"""
from __future__ import annotations


from fractions import Fraction

import mpmath
import sympy
from gmpy2 import mpq

from .fields import Fp2, KummerElement, KummerField, QOmega, to_mpq

__all__ = [
    "Curve",
    "Point",
    "mordell",
    "E",
    "cm_action",
    "apply_unit",
    "omega_like",
    "torsion3",
    "scale_iso",
    "triplication_fiber",
    "division_polynomial",
    "cube_free_part",
]


def _is_zero(v) -> bool:
    if isinstance(v, (int, mpq)) or type(v).__name__ == "mpz":
        return v == 0
    if hasattr(v, "is_zero"):
        return v.is_zero()
    if isinstance(v, (mpmath.mpc, mpmath.mpf, complex, float)):
        return abs(v) < mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))
    return v == 0


class Curve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0):
        self.a = (a1, a2, a3, a4, a6)

    @property
    def a1(self):
        return self.a[0]

    @property
    def a2(self):
        return self.a[1]

    @property
    def a3(self):
        return self.a[2]

    @property
    def a4(self):
        return self.a[3]

    @property
    def a6(self):
        return self.a[4]

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __eq__(self, other):
        return isinstance(other, Curve) and all(_is_zero(x - y) for x, y in zip(self.a, other.a))

    def __hash__(self):
        return hash(tuple(str(x) for x in self.a))

    def __repr__(self):
        return f"Curve{tuple(self.a)}"

    def zero(self) -> Point:
        return Point(self, None, None)

    def __call__(self, x, y) -> Point:
        # plain integers would turn into floats under the chord slopes
        if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpz":
            x = mpq(x)
        if isinstance(y, (int, Fraction)) or type(y).__name__ == "mpz":
            y = mpq(y)
        P = Point(self, x, y)
        if not self.contains(P):
            raise ValueError(f"point {P} is not on {self}")
        return P

    def lhs_rhs(self, x, y):
        a1, a2, a3, a4, a6 = self.a
        return y * y + a1 * x * y + a3 * y, x * x * x + a2 * x * x + a4 * x + a6

    def contains(self, P: Point) -> bool:
        if P.is_zero():
            return True
        lhs, rhs = self.lhs_rhs(P.x, P.y)
        return _is_zero(lhs - rhs)

    def residual(self, P: Point):
        lhs, rhs = self.lhs_rhs(P.x, P.y)
        return lhs - rhs

    def change(self, u, r, s, t) -> Curve:
        """Model for x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        if isinstance(u, int) or type(u).__name__ == "mpz":
            u = mpq(u)
        a1, a2, a3, a4, a6 = self.a
        na1 = (a1 + 2 * s) / u if u != 1 else a1 + 2 * s
        na2 = a2 - s * a1 + 3 * r - s * s
        na3 = a3 + r * a1 + 2 * t
        na4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        na6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
        if u != 1:
            na2, na3, na4, na6 = na2 / u ** 2, na3 / u ** 3, na4 / u ** 4, na6 / u ** 6
        return Curve(na1, na2, na3, na4, na6)

    def change_point(self, P: Point, target: Curve, u, r, s, t) -> Point:
        if P.is_zero():
            return target.zero()
        if isinstance(u, int) or type(u).__name__ == "mpz":
            u = mpq(u)
        x1 = (P.x - r) / (u * u)
        y1 = (P.y - s * (P.x - r) - t) / (u ** 3)
        return Point(target, x1, y1)


class Point:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    def is_zero(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_zero():
            return "O"
        return f"({self.x}, {self.y})"

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return _is_zero(self.x - other.x) and _is_zero(self.y - other.y)

    def __hash__(self):
        return hash(("pt", str(self.x), str(self.y)))

    def __neg__(self):
        if self.is_zero():
            return self
        a1, _, a3, _, _ = self.curve.a
        return Point(self.curve, self.x, -self.y - a1 * self.x - a3)

    def __add__(self, other: Point) -> Point:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a1, a2, a3, a4, a6 = self.curve.a
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if _is_zero(x1 - x2):
            if _is_zero(y1 + y2 + a1 * x2 + a3):
                return self.curve.zero()
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return Point(self.curve, x3, y3)

    def __sub__(self, other: Point) -> Point:
        return self + (-other)

    def __mul__(self, n: int) -> Point:
        n = int(n)
        if n < 0:
            return (-self) * (-n)
        out, base = self.curve.zero(), self
        while n:
            if n & 1:
                out = out + base
            base = base + base
            n >>= 1
        return out

    __rmul__ = __mul__

    def map(self, f) -> Point:
        """Apply f to both coordinates (e.g. an embedding or Galois automorphism)."""
        if self.is_zero():
            return self
        return Point(self.curve, f(self.x), f(self.y))

    def to_complex(self) -> Point:
        if self.is_zero():
            return Point(mordell(mpmath.mpc(0)), None, None)
        x = _to_c(self.x)
        y = _to_c(self.y)
        c = Curve(*[_to_c(a) for a in self.curve.a])
        return Point(c, x, y)

    def order(self, bound: int = 1000) -> int | None:
        Q = self
        for k in range(1, bound + 1):
            if Q.is_zero():
                return k
            Q = Q + self
        return None


def _to_c(v):
    if hasattr(v, "to_complex"):
        return v.to_complex()
    if isinstance(v, (mpmath.mpc, mpmath.mpf)):
        return mpmath.mpc(v)
    return mpmath.mpc(int(to_mpq(v).numerator)) / int(to_mpq(v).denominator)


def mordell(k) -> Curve:
    return Curve(0, 0, 0, 0, k)


def E(n, field=None) -> Curve:
    """E_n : y^2 = x^3 - 432 n^2, coefficients coerced into ``field`` if given."""
    k = -432 * to_mpq(n) ** 2
    if field is not None:
        k = field(k)
    return mordell(k)


def omega_like(v):
    """omega in the field of the coordinate v."""
    if isinstance(v, QOmega):
        return QOmega(0, 1)
    if isinstance(v, KummerElement):
        return v.field(QOmega(0, 1))
    if isinstance(v, Fp2):
        return Fp2(v.p, 0, 1)
    if isinstance(v, (mpmath.mpc, mpmath.mpf, complex)):
        return mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
    raise TypeError("coordinate field lacks omega")


def cm_action(u, P: Point) -> Point:
    """[u]P for u in {'omega', 'omega2', -1, 'sqrt-3'} (or an integer) on a Mordell curve."""
    a1, a2, _, a4, _ = P.curve.a
    if not all(_is_zero(c) for c in (a1, a2, a4)):
        raise ValueError("CM action needs a model y^2 + a3 y = x^3 + a6")
    if isinstance(u, int):
        return P * u
    if P.is_zero():
        return P
    w = omega_like(P.x)
    if u == "omega":
        return Point(P.curve, w * P.x, P.y)
    if u == "omega2":
        return Point(P.curve, w * w * P.x, P.y)
    if u == "sqrt-3":
        # sqrt(-3) = omega - omega^2
        return cm_action("omega", P) - cm_action("omega2", P)
    raise ValueError(f"unknown endomorphism {u!r}")


def apply_unit(k: int, P: Point) -> Point:
    """[omega^k]P."""
    k %= 3
    if k == 0 or P.is_zero():
        return P
    return cm_action("omega" if k == 1 else "omega2", P)


def cube_free_part(n: int) -> int:
    n = int(n)
    sign = -1 if n < 0 else 1
    out = 1
    for q, e in sympy.factorint(abs(n)).items():
        out *= q ** (e % 3)
    return sign * out


def torsion3(n) -> list[Point]:
    """The nine points of E_n[3] over K(cbrt(n)) (or K when n is a cube).

    x = 0 gives y = +-12 n sqrt(-3); x^3 = 1728 n^2 gives y = +-36 n.
    """
    n = to_mpq(n)
    num, den = int(n.numerator), int(n.denominator)
    m = cube_free_part(num * num * den)  # n^2 = m * (cube) up to den^3
    F = KummerField([m]) if m != 1 else QOmega
    Ecur = E(n, F)
    sqrt_m3 = F(QOmega(1, 2))
    pts = [Ecur.zero()]
    for s in (1, -1):
        pts.append(Point(Ecur, F(0), F(12 * n * s) * sqrt_m3))
    # cbrt(1728 n^2) = 12 * cbrt(n^2)
    cube = num * num * den
    if m != 1:
        root = F.gen(0) * F(12 * _icbrt(cube // m)) / F(den)
    else:
        root = F(12 * _icbrt(cube)) / F(den)
    w = F(QOmega(0, 1))
    for i in range(3):
        for s in (1, -1):
            pts.append(Point(Ecur, root * w ** i, F(36 * n * s)))
    for P in pts:
        if not Ecur.contains(P):
            raise AssertionError("torsion point off the curve")
    return pts


def _icbrt(v: int) -> int:
    r = round(abs(v) ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c ** 3 == abs(v):
            return c if v >= 0 else -c
    # fall back to exact integer root
    r = int(sympy.integer_nthroot(abs(v), 3)[0])
    if r ** 3 != abs(v):
        raise ValueError("not a perfect cube")
    return r if v >= 0 else -r


def scale_iso(n, u, field=None):
    """(E_{n u^3}, point map) for the isomorphism (x, y) -> (u^2 x, u^3 y) out of E_n.

    ``u`` is a rational or a field element whose cube is rational.
    """
    u3 = u ** 3
    if isinstance(u3, KummerElement):
        u3 = u3.to_K()
    if isinstance(u3, QOmega):
        if not u3.is_rational():
            raise ValueError("u^3 must be rational")
        u3 = u3.a
    target_n = to_mpq(n) * to_mpq(u3)
    Et = E(target_n, field)

    def phi(P: Point) -> Point:
        if P.is_zero():
            return Et.zero()
        return Point(Et, u * u * P.x, u ** 3 * P.y)

    return target_n, Et, phi


def division_polynomial(k, m: int):
    """psi_m for y^2 = x^3 + k as a sympy polynomial in (x, y), with y^2 reduced."""
    x, y = sympy.symbols("x y")
    f = x ** 3 + k
    psi = {0: sympy.Integer(0), 1: sympy.Integer(1), 2: 2 * y,
           3: 3 * x ** 4 + 12 * k * x,
           4: 4 * y * (x ** 6 + 20 * k * x ** 3 - 8 * k ** 2)}

    def red(e):
        e = sympy.expand(e)
        p = sympy.Poly(e, y)
        out = 0
        for (d,), c in p.terms():
            out += c * f ** (d // 2) * y ** (d % 2)
        return sympy.expand(out)

    def get(j):
        if j in psi:
            return psi[j]
        h = j // 2
        if j % 2:
            v = get(h + 2) * get(h) ** 3 - get(h - 1) * get(h + 1) ** 3
        else:
            v = get(h) * (get(h + 2) * get(h - 1) ** 2 - get(h - 2) * get(h + 1) ** 2) / (2 * y)
        psi[j] = red(v)
        return psi[j]

    return get(m), (x, y)


def triplication_fiber(k, x0):
    """Monic degree-9 polynomial whose roots are x(A) for all A with x([3]A) = x0."""
    psi2, (x, y) = division_polynomial(k, 2)
    psi3, _ = division_polynomial(k, 3)
    psi4, _ = division_polynomial(k, 4)
    f = x ** 3 + k
    # x([3]A) = x - psi2 psi4 / psi3^2, and psi2 psi4 is a polynomial in x after y^2 = f
    prod = sympy.expand(psi2 * psi4)
    prod = sympy.expand(prod.subs(y ** 2, f))
    num = sympy.expand(x * psi3 ** 2 - prod - x0 * psi3 ** 2)
    poly = sympy.Poly(num, x)
    return sympy.Poly(poly / poly.LC(), x)
