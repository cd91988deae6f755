"""Eisenstein integers, cubic residue symbols, and ring class groups of K = Q(omega).

Classes of Pic(O_c) are reduced positive definite binary quadratic forms of
discriminant -3c^2.  The form (A, B, C) corresponds to the O_c-ideal
A*Z + ((-B + sqrt(D))/2)*Z.  Cubic characters are evaluated through the Artin map:
chi_n([a]) = (n / a)_3 for an ideal a prime to 3nc, so that chi_n(Frob_pi)
describes the action of Frobenius on cbrt(n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import sympy

from .fields import QOmega

__all__ = [
    "EisInt",
    "FormClass",
    "PicGroup",
    "CubicCharacter",
    "pic_enumerate",
    "compose",
    "cubic_residue_symbol",
    "cubic_symbol_exponent",
    "chi_eval",
    "kernel_subgroup",
    "prime_representative",
    "ideal_class_of",
    "idele_class_at_3",
]


class EisInt:
    """a + b*omega with a, b integers."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = int(a)
        self.b = int(b)

    @classmethod
    def coerce(cls, x) -> EisInt:
        if isinstance(x, EisInt):
            return x
        if isinstance(x, QOmega):
            if not x.is_integral():
                raise ValueError("not an Eisenstein integer")
            return cls(int(x.a), int(x.b))
        return cls(int(x), 0)

    def __add__(self, o):
        o = EisInt.coerce(o)
        return EisInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return EisInt(-self.a, -self.b)

    def __sub__(self, o):
        o = EisInt.coerce(o)
        return EisInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return EisInt.coerce(o) - self

    def __mul__(self, o):
        o = EisInt.coerce(o)
        a, b, c, d = self.a, self.b, o.a, o.b
        return EisInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = EisInt(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> EisInt:
        return EisInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __eq__(self, o):
        try:
            o = EisInt.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"EisInt({self.a}, {self.b})"

    def to_qomega(self) -> QOmega:
        return QOmega(self.a, self.b)

    @staticmethod
    def _round_div(x: int, n: int) -> int:
        return (2 * x + n) // (2 * n)

    def __divmod__(self, o):
        # Euclidean division: round self * conj(o) / N(o) coordinatewise
        o = EisInt.coerce(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[omega]")
        t = self * o.conj()
        q = EisInt(self._round_div(t.a, n), self._round_div(t.b, n))
        return q, self - q * o

    def __mod__(self, o):
        return divmod(self, o)[1]

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def divides(self, o) -> bool:
        o = EisInt.coerce(o)
        n = self.norm()
        if n == 0:
            return not o
        t = o * self.conj()
        return t.a % n == 0 and t.b % n == 0

    def exact_div(self, o) -> EisInt:
        o = EisInt.coerce(o)
        n = o.norm()
        t = self * o.conj()
        if t.a % n or t.b % n:
            raise ValueError("inexact division")
        return EisInt(t.a // n, t.b // n)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def associates(self):
        u = EisInt(1)
        out = []
        for _ in range(6):
            out.append(self * u)
            u = u * EisInt(1, 1)  # 1 + omega = -omega^2 has order 6
        return out

    def primary(self) -> EisInt:
        """The associate congruent to +-1 modulo 3 (requires 3 not dividing norm)."""
        if self.norm() % 3 == 0:
            raise ValueError("elements above 3 have no primary associate")
        for v in self.associates():
            if v.b % 3 == 0 and v.a % 3 == 2:
                return v
        raise AssertionError("unreachable")


UNITS = EisInt(1).associates()
OMEGA_E = EisInt(0, 1)


def eis_gcd(x, y) -> EisInt:
    x, y = EisInt.coerce(x), EisInt.coerce(y)
    while y:
        x, y = y, x % y
    return x


def eis_factor(x) -> list[tuple[EisInt, int]]:
    """Prime factorization of a nonzero Eisenstein integer, up to a unit."""
    x = EisInt.coerce(x)
    out = []
    for q, e in sorted(sympy.factorint(x.norm()).items()):
        if q == 3:
            primes = [EisInt(1, -1)]  # 1 - omega
        elif q % 3 == 2:
            primes = [EisInt(q)]
        else:
            pi = eis_gcd(EisInt(q), EisInt(_sqrt_m3_mod(q), 0) - EisInt(1, 2))
            primes = [pi, pi.conj()]
        for pi in primes:
            k = 0
            while x.norm() > 1 and pi.divides(x):
                x = x.exact_div(pi)
                k += 1
            if k:
                out.append((pi, k))
    if x.norm() != 1:
        raise AssertionError("factorization incomplete")
    return out


def _sqrt_m3_mod(q: int) -> int:
    return int(sympy.sqrt_mod(-3 % q, q))


def _is_eis_prime(pi: EisInt) -> bool:
    n = pi.norm()
    if sympy.isprime(n):
        return True
    r = math.isqrt(n)
    return r * r == n and sympy.isprime(r) and r % 3 == 2


def cubic_symbol_exponent(alpha, pi) -> int | None:
    """k in {0, 1, 2} with (alpha/pi)_3 = omega^k, or None when pi | alpha."""
    alpha, pi = EisInt.coerce(alpha), EisInt.coerce(pi)
    n = pi.norm()
    if n % 3 == 0:
        raise ValueError("cubic residue symbol undefined at the prime above 3")
    if not _is_eis_prime(pi):
        raise ValueError("modulus is not prime in Z[omega]")
    r = alpha % pi
    if not r:
        return None
    e = (n - 1) // 3
    acc, base = EisInt(1), r
    while e:
        if e & 1:
            acc = (acc * base) % pi
        base = (base * base) % pi
        e >>= 1
    for k, w in enumerate((EisInt(1), OMEGA_E, OMEGA_E * OMEGA_E)):
        if pi.divides(acc - w):
            return k
    raise AssertionError("power is not a cube root of unity modulo pi")


def cubic_residue_symbol(alpha, pi) -> QOmega:
    """(alpha/pi)_3 as an element of K: 1, omega, omega^2, or 0 if pi | alpha."""
    k = cubic_symbol_exponent(alpha, pi)
    if k is None:
        return QOmega(0)
    return QOmega(0, 1) ** k


def cubic_symbol_ideal_exponent(n: int, alpha) -> int:
    """Exponent of (n / (alpha))_3 for an ideal (alpha) prime to 3n, multiplicatively."""
    total = 0
    for pi, e in eis_factor(alpha):
        k = cubic_symbol_exponent(n, pi)
        if k is None:
            raise ValueError("ideal is not prime to the radicand")
        total += e * k
    return total % 3


# --------------------------------------------------------------------------
# Binary quadratic forms


@dataclass(frozen=True, order=True)
class FormClass:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def reduce(self) -> FormClass:
        A, B, C = self.A, self.B, self.C
        if A <= 0 or self.disc >= 0:
            raise ValueError("only positive definite forms are supported")
        while True:
            if B > A or B <= -A:
                # normalize: B into (-A, A]
                k = (A - B) // (2 * A)
                B, C = B + 2 * k * A, A * k * k + B * k + C
            if A > C:
                A, B, C = C, -B, A
                continue
            if A == C and B < 0:
                B = -B
            return FormClass(A, B, C)

    def inverse(self) -> FormClass:
        return FormClass(self.A, -self.B, self.C).reduce()

    def value(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def transform(self, m) -> FormClass:
        """The form (x, y) -> f(a x + b y, c x + d y) for m = ((a, b), (c, d))."""
        (a, b), (c, d) = m
        A = self.value(a, c)
        C = self.value(b, d)
        B = 2 * self.A * a * b + self.B * (a * d + b * c) + 2 * self.C * c * d
        return FormClass(A, B, C)

    def root(self) -> QOmega:
        """The root in the upper half plane, exact in K (requires D = -3 c^2)."""
        c = _conductor_of(self.disc)
        # (-B + sqrt(D)) / (2A), sqrt(D) = c*sqrt(-3)
        return QOmega.from_sqrt_m3(-self.B, c) / (2 * self.A)


def _conductor_of(D: int) -> int:
    if D >= 0 or (-D) % 3:
        raise ValueError("discriminant is not of the form -3c^2")
    c = math.isqrt(-D // 3)
    if 3 * c * c != -D:
        raise ValueError("discriminant is not of the form -3c^2")
    return c


def principal_form(D: int) -> FormClass:
    if D % 4 == 0:
        return FormClass(1, 0, -D // 4)
    return FormClass(1, 1, (1 - D) // 4)


def compose(f: FormClass, g: FormClass) -> FormClass:
    """Gaussian composition of primitive forms of equal discriminant, reduced."""
    if f.disc != g.disc:
        raise ValueError("discriminant mismatch")
    D = f.disc
    (a1, b1, _c1), (a2, b2, c2) = (f.A, f.B, f.C), (g.A, g.B, g.C)
    if a1 > a2:
        (a1, b1, _c1), (a2, b2, c2) = (a2, b2, c2), (a1, b1, _c1)
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _v = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return FormClass(a3, b3, c3).reduce()


def _xgcd(a: int, b: int):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def pic_enumerate(c: int) -> list[FormClass]:
    """Reduced primitive forms of discriminant -3c^2, one per class of Pic(O_c)."""
    if c < 1:
        raise ValueError("conductor must be positive")
    D = -3 * c * c
    out = []
    amax = math.isqrt(-D // 3)
    for A in range(1, amax + 1):
        for B in range(-A + 1, A + 1):
            if (B * B - D) % (4 * A):
                continue
            C = (B * B - D) // (4 * A)
            if C < A:
                continue
            f = FormClass(A, B, C)
            if not f.is_reduced() or math.gcd(math.gcd(A, B), C) != 1:
                continue
            out.append(f)
    return sorted(out)


class PicGroup:
    """Pic(O_c) realized on reduced forms."""

    def __init__(self, c: int):
        self.c = c
        self.D = -3 * c * c
        self.elements = pic_enumerate(c)
        self.identity = principal_form(self.D).reduce()
        self._index = {f: i for i, f in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, f):
        return f in self._index

    def mul(self, f, g) -> FormClass:
        return compose(f, g)

    def inv(self, f) -> FormClass:
        return f.inverse()

    def pow(self, f, n: int) -> FormClass:
        if n < 0:
            f, n = f.inverse(), -n
        out, base = self.identity, f
        while n:
            if n & 1:
                out = compose(out, base)
            base = compose(base, base)
            n >>= 1
        return out

    def order(self, f) -> int:
        k, g = 1, f
        while g != self.identity:
            g = compose(g, f)
            k += 1
        return k

    def character(self, n: int) -> CubicCharacter:
        return CubicCharacter(n, self)


def prime_representative(cls: FormClass, avoid: int, search: int = 60):
    """An equivalent form (A, B, C), not necessarily reduced, with A a prime
    not dividing ``avoid``.  Returns (form, transforming SL2(Z) matrix)."""
    best = None
    for x in range(-search, search + 1):
        for y in range(0, search + 1):
            if y == 0 and x <= 0:
                continue
            if math.gcd(x, y) != 1:
                continue
            v = cls.value(x, y)
            if v < 2 or avoid % v == 0 or math.gcd(v, avoid) != 1:
                continue
            if best is not None and v >= best[0]:
                continue
            if sympy.isprime(v):
                best = (v, x, y)
    if best is None:
        raise ValueError("no prime representative found in the search box")
    _, x, y = best
    g, s, r = _xgcd(x, y)  # x*s + y*r = 1
    m = ((x, -r), (y, s))
    f = cls.transform(m)
    return f, m


def _ideal_prime(form: FormClass) -> EisInt:
    """Prime of O_K of norm A dividing (-B + sqrt(D))/2, for form with A prime."""
    c = _conductor_of(form.disc)
    # sqrt(D) = c*(1 + 2 omega)
    beta = EisInt((c - form.B) // 2, c)
    pi = eis_gcd(EisInt(form.A), beta)
    if pi.norm() != form.A:
        raise AssertionError("ideal is not prime of the expected norm")
    return pi


class CubicCharacter:
    """chi_n on Pic(O_c): [a] -> (n / a)_3, tabulated as exponents of omega."""

    def __init__(self, n: int, group: PicGroup):
        self.n = n
        self.group = group
        avoid = 6 * n * group.c
        self.table = {}
        for f in group.elements:
            if f == group.identity:
                self.table[f] = 0
                continue
            rep, _ = prime_representative(f, avoid)
            self.table[f] = cubic_symbol_exponent(n, _ideal_prime(rep))

    def exponent(self, f: FormClass) -> int:
        return self.table[f.reduce()]

    def __call__(self, f: FormClass) -> QOmega:
        return QOmega(0, 1) ** self.exponent(f)

    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.table.values())


def chi_eval(n: int, cls: FormClass) -> QOmega:
    group = _group_for(_conductor_of(cls.disc))
    return group.character(n)(cls)


_GROUPS: dict[int, PicGroup] = {}


def _group_for(c: int) -> PicGroup:
    if c not in _GROUPS:
        _GROUPS[c] = PicGroup(c)
    return _GROUPS[c]


def kernel_subgroup(chars, group: PicGroup) -> list[FormClass]:
    return [f for f in group.elements if all(ch.exponent(f) == 0 for ch in chars)]


# --------------------------------------------------------------------------
# Ideals prime to the conductor and their classes


def ideal_class_of(alpha, c: int) -> FormClass:
    """Class in Pic(O_c) of the O_c-ideal alpha*O_K meet O_c, alpha prime to c."""
    alpha = EisInt.coerce(alpha)
    if math.gcd(alpha.norm(), c) != 1:
        raise ValueError("generator is not prime to the conductor")
    # a rational content k is principal in O_c
    k = math.gcd(alpha.a, alpha.b)
    alpha = EisInt(alpha.a // k, alpha.b // k)
    # Z-basis of alpha*O_K in coordinates (1, omega)
    gens = [(alpha.a, alpha.b), ((alpha * OMEGA_E).a, (alpha * OMEGA_E).b)]
    # O_c = Z + c*omega Z: intersect by requiring the omega-coordinate divisible by c
    # sublattice {v in alpha O_K : v_omega = 0 mod c}
    rows = []
    for i in range(c):
        for j in range(c):
            v = (i * gens[0][0] + j * gens[1][0], i * gens[0][1] + j * gens[1][1])
            if v[1] % c == 0:
                rows.append(v)
    rows += [(c * a, c * b) for a, b in gens]
    a_num, tb = _hnf2(rows)
    # HNF basis: (N, 0) and (t, c*m) with omega-coordinate c*m; primitive => m = 1
    (n_, _), (t, u) = a_num, tb
    m = u // c
    if m != 1:
        k = math.gcd(math.gcd(n_, t), m)
        raise AssertionError(f"non-primitive ideal (content {k})")
    # t + c*omega = (-B + sqrt(D))/2 with B = c - 2t
    B = c - 2 * t
    A = n_
    D = -3 * c * c
    C = (B * B - D) // (4 * A)
    return FormClass(A, B, C).reduce()


def _hnf2(rows):
    """Upper-triangular HNF basis ((N, 0), (t, u)) of the Z-span of integer pairs."""
    g = 0
    for _, y in rows:
        g = math.gcd(g, y)
    # find combination achieving omega-coordinate g
    vec = (0, 0)
    for x, y in rows:
        if y == 0:
            continue
        d, s, r = _xgcd(vec[1], y)
        vec = (s * vec[0] + r * x, d)
    if g == 0:
        raise ValueError("degenerate lattice")
    # kernel of projection to second coordinate
    n = 0
    for x, y in rows:
        k = y // g
        n = math.gcd(n, x - k * vec[0])
    t = vec[0] % n
    return (n, 0), (t, g)


def idele_class_at_3(u, c: int) -> FormClass:
    """Class of the idele equal to the 3-adic unit u at 3 and 1 elsewhere.

    A global alpha with alpha = u modulo 9 and alpha = 1 modulo the prime-to-3
    part of c moves the idele to alpha^{-1} away from 3c, i.e. to the ideal
    (alpha)^{-1}.
    """
    u = EisInt.coerce(u)
    c3 = 1
    while c % (3 * c3) == 0:
        c3 *= 3
    m3 = max(9, c3 * 3)
    rest = c // c3
    a = int(sympy.ntheory.modular.crt([m3, rest], [u.a % m3, 1 % rest])[0])
    b = int(sympy.ntheory.modular.crt([m3, rest], [u.b % m3, 0])[0])
    alpha = EisInt(a, b)
    if math.gcd(alpha.norm(), 3 * c) != 1:
        raise ValueError("approximation is not prime to 3c")
    return ideal_class_of(alpha, c).inverse()
