"""Arbitrary-precision numerics: complex balls, Dedekind eta, SL2(Z) reduction,
and recognition of algebraic numbers from numerical approximations.

All transcendental work happens in mpmath at an explicit bit precision.  Radii
are propagated by first-order rules plus one ulp per operation; they are a
bookkeeping device, not a rigorous enclosure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from .fields import QOmega, to_mpq

__all__ = [
    "PrecisionError",
    "RecognitionError",
    "ComplexBall",
    "UpperHalfPoint",
    "eta",
    "eta_anywhere",
    "reduce_to_fundamental",
    "eta_multiplier",
    "dedekind_sum",
    "lll_reduce",
    "RecognitionResult",
    "recognize",
    "recognize_rational",
    "recognize_qomega",
]

MAX_ETA_TERMS = 200_000


class PrecisionError(ArithmeticError):
    """Raised when a series cannot reach the requested precision."""


class RecognitionError(ArithmeticError):
    """Raised when no exact value can be certified from the numerical data."""


# --------------------------------------------------------------------------
# Complex balls


class ComplexBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpmath.mpc(mid)
        self.rad = mpmath.mpf(rad)

    @staticmethod
    def _ulp(x):
        return abs(x) * mpmath.mpf(2) ** (1 - mpmath.mp.prec)

    @classmethod
    def exact(cls, value) -> ComplexBall:
        return cls(value, 0)

    def _coerce(self, other) -> ComplexBall:
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, QOmega):
            return ComplexBall(other.to_complex(), 0)
        return ComplexBall(mpmath.mpc(other), 0)

    def __add__(self, other):
        o = self._coerce(other)
        m = self.mid + o.mid
        return ComplexBall(m, self.rad + o.rad + self._ulp(m))

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        o = self._coerce(other)
        m = self.mid - o.mid
        return ComplexBall(m, self.rad + o.rad + self._ulp(m))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        m = self.mid * o.mid
        r = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return ComplexBall(m, r + self._ulp(m))

    __rmul__ = __mul__

    def inverse(self) -> ComplexBall:
        a = abs(self.mid)
        if a <= self.rad:
            raise ZeroDivisionError("ball contains zero")
        m = 1 / self.mid
        return ComplexBall(m, self.rad / (a * (a - self.rad)) + self._ulp(m))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ComplexBall(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def contains(self, value) -> bool:
        return abs(mpmath.mpc(value) - self.mid) <= self.rad

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def is_zero(self) -> bool:
        return self.contains_zero()

    def __bool__(self):
        return not self.contains_zero()

    def overlaps(self, other: ComplexBall) -> bool:
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def widen(self, extra) -> ComplexBall:
        return ComplexBall(self.mid, self.rad + extra)

    def __repr__(self):
        return f"ComplexBall({mpmath.nstr(self.mid, 15)} +/- {mpmath.nstr(self.rad, 3)})"


# --------------------------------------------------------------------------
# Points of the upper half plane


@dataclass(frozen=True)
class UpperHalfPoint:
    """An exact point tau of K = Q(omega) with Im(tau) > 0."""

    value: QOmega

    def __post_init__(self):
        if self.value.b <= 0:
            raise ValueError("point is not in the upper half plane")

    @classmethod
    def from_omega(cls, a, b) -> UpperHalfPoint:
        return cls(QOmega(a, b))

    def real(self) -> mpq:
        return self.value.a - self.value.b / 2

    def imag_over_sqrt3(self) -> mpq:
        return self.value.b / 2

    def abs2(self) -> mpq:
        return self.value.norm()

    def apply(self, gamma) -> UpperHalfPoint:
        (a, b), (c, d) = gamma
        num = self.value * a + b
        den = self.value * c + d
        return UpperHalfPoint(num / den)

    def scale(self, m) -> UpperHalfPoint:
        return UpperHalfPoint(self.value * to_mpq(m))

    def to_mpc(self):
        return self.value.to_complex()


def _matmul(g, h):
    (a, b), (c, d) = g
    (e, f), (gg, hh) = h
    return ((a * e + b * gg, a * f + b * hh), (c * e + d * gg, c * f + d * hh))


def reduce_to_fundamental(tau):
    """Return (tau', gamma) with tau' = gamma tau in the standard fundamental domain.

    Exact for ``UpperHalfPoint`` input; numerical (mpc) input is reduced with
    floating comparisons.
    """
    gamma = ((1, 0), (0, 1))
    if isinstance(tau, UpperHalfPoint):
        t = tau
        for _ in range(10_000):
            re = t.real()
            n = int(gmpy2.f_div(re.numerator * 2 + re.denominator, 2 * re.denominator))
            if n:
                t = t.apply(((1, -n), (0, 1)))
                gamma = _matmul(((1, -n), (0, 1)), gamma)
            if t.abs2() < 1:
                t = t.apply(((0, -1), (1, 0)))
                gamma = _matmul(((0, -1), (1, 0)), gamma)
            else:
                return t, gamma
        raise PrecisionError("reduction did not terminate")
    t = mpmath.mpc(tau)
    if t.imag <= 0:
        raise ValueError("point is not in the upper half plane")
    for _ in range(10_000):
        n = int(mpmath.nint(t.real))
        if n:
            t = t - n
            gamma = _matmul(((1, -n), (0, 1)), gamma)
        if abs(t) < 1 - mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
            t = -1 / t
            gamma = _matmul(((0, -1), (1, 0)), gamma)
        else:
            return t, gamma
    raise PrecisionError("reduction did not terminate")


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) for k >= 1, via the reciprocity law."""
    if k <= 0:
        raise ValueError("k must be positive")
    h %= k
    if h == 0:
        return Fraction(0)
    sign = 1
    total = Fraction(0)
    a, b = h, k
    # s(a,b) + s(b,a) = (a/b + b/a + 1/(ab))/12 - 1/4
    while a != 0:
        total += sign * (Fraction(a, b) + Fraction(b, a) + Fraction(1, a * b) - 3) / 12
        sign = -sign
        a, b = b % a, a
    return total


def dedekind_sum_naive(h: int, k: int) -> Fraction:
    def saw(x: Fraction) -> Fraction:
        if x.denominator == 1:
            return Fraction(0)
        return x - math.floor(x) - Fraction(1, 2)

    return sum((saw(Fraction(r, k)) * saw(Fraction(h * r, k)) for r in range(1, k)), Fraction(0))


def eta_multiplier(gamma, tau_c):
    """Factor m with eta(gamma tau) = m * eta(tau), gamma in SL2(Z)."""
    (a, b), (c, d) = gamma
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        return mpmath.expjpi(mpmath.mpf(b) / 12)
    phase = Fraction(a + d, 12 * c) - dedekind_sum(d, c)
    eps = mpmath.expjpi(mpmath.mpf(phase.numerator) / phase.denominator)
    return eps * mpmath.sqrt(-1j * (c * tau_c + d))


def eta(tau, prec: int = 256) -> ComplexBall:
    """Dedekind eta by the truncated q-product q^{1/24} prod (1 - q^n)."""
    if prec < 64:
        raise ValueError("prec must be at least 64 bits")
    with mpmath.workprec(prec + 24):
        t = tau.to_mpc() if isinstance(tau, UpperHalfPoint) else mpmath.mpc(tau)
        if t.imag <= 0:
            raise ValueError("point is not in the upper half plane")
        q = mpmath.expj(2 * mpmath.pi * t)
        aq = abs(q)
        cutoff = mpmath.mpf(2) ** (-prec - 16)
        if aq >= 1 - mpmath.mpf(2) ** -20:
            raise PrecisionError("Im(tau) too small for the q-product")
        n_needed = int(mpmath.ceil(mpmath.log(cutoff) / mpmath.log(aq))) + 1
        if n_needed > MAX_ETA_TERMS:
            raise PrecisionError(f"q-product needs {n_needed} terms; reduce tau first")
        prod = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        n = 0
        while True:
            n += 1
            qn *= q
            if abs(qn) < cutoff:
                break
            prod *= 1 - qn
        val = mpmath.expj(2 * mpmath.pi * t / 24) * prod
        tail = 2 * abs(qn) / (1 - aq)
        rad = abs(val) * (tail + mpmath.mpf(2) ** (8 - prec))
        return ComplexBall(val, rad)


def eta_anywhere(tau, prec: int = 256) -> ComplexBall:
    """eta(tau) computed at the SL2(Z)-reduced point and transported back."""
    with mpmath.workprec(prec + 32):
        tred, gamma = reduce_to_fundamental(tau)
        base = eta(tred, prec + 16)
        (a, b), (c, d) = gamma
        inv = ((d, -b), (-c, a))
        tc = tred.to_mpc() if isinstance(tred, UpperHalfPoint) else tred
        m = eta_multiplier(inv, tc)
        out = base * ComplexBall(m, abs(m) * mpmath.mpf(2) ** (-prec - 8))
        return out


# --------------------------------------------------------------------------
# Lattice reduction and recognition


def lll_reduce(basis, delta=Fraction(3, 4)):
    """Integral LLL (Cohen, Alg. 2.6.7) on a list of integer row vectors."""
    b = [[mpz(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [mpz(0)] * (n + 1)
    lam = [[mpz(0)] * n for _ in range(n)]
    d[0] = mpz(1)
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("basis vectors must be independent")

    def redi(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (B * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    num, den = delta.numerator, delta.denominator
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
                    if u == 0:
                        raise ValueError("basis vectors must be independent")
        while True:
            redi(k, k - 1)
            if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lam[k][k - 1] ** 2:
                swapi(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    redi(k, l)
                k += 1
                break
    return b


@dataclass
class RecognitionResult:
    minimal_polynomial: list[int]  # coefficients, constant term first
    certified: bool
    residual: float

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1


def _poly_eval(coeffs, x):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _find_relation(x, degree: int, prec: int):
    scale = mpmath.mpf(2) ** (prec // 2)
    powers = [mpmath.mpc(1)]
    for _ in range(degree):
        powers.append(powers[-1] * x)
    rows = []
    for k, pk in enumerate(powers):
        row = [0] * (degree + 1)
        row[k] = 1
        row.append(int(mpmath.nint(scale * pk.real)))
        row.append(int(mpmath.nint(scale * pk.imag)))
        rows.append(row)
    # the imaginary column vanishes for real input; drop it to keep rows independent
    if all(r[-1] == 0 for r in rows):
        rows = [r[:-1] for r in rows]
    red = lll_reduce(rows)
    return [int(c) for c in red[0][: degree + 1]]


def _irreducible_factor_at(coeffs, x):
    import sympy

    X = sympy.Symbol("X")
    poly = sympy.Poly(list(reversed(coeffs)), X)
    _, factors = sympy.factor_list(poly)
    best, best_val = None, None
    for fac, _ in factors:
        c = [int(v) for v in reversed(fac.all_coeffs())]
        v = abs(_poly_eval(c, x)) / max(1, max(abs(t) for t in c))
        if best_val is None or v < best_val:
            best, best_val = c, v
    if best[-1] < 0:
        best = [-t for t in best]
    return best


def recognize(x, max_degree: int, max_coeff_bits: int, recompute=None) -> RecognitionResult:
    """Find an integer polynomial of degree <= max_degree vanishing at x.

    ``x`` is a ComplexBall (or mpmath number) at the current working precision;
    ``recompute(prec)`` optionally re-evaluates x at a higher precision.  The
    result is certified only if the relation has coefficients within
    ``max_coeff_bits`` and persists when x is known to doubled precision.
    Raises RecognitionError when nothing certifies.
    """
    ball = x if isinstance(x, ComplexBall) else ComplexBall(x, abs(mpmath.mpc(x)) * mpmath.mpf(2) ** (-mpmath.mp.prec + 4))
    prec = mpmath.mp.prec
    rad = max(ball.rad, mpmath.mpf(2) ** (-prec))
    eff_prec = int(-mpmath.log(rad / max(1, abs(ball.mid)), 2)) - 4
    if eff_prec < 16:
        raise RecognitionError("input radius too large")
    best_err = None
    for d in range(1, max_degree + 1):
        with mpmath.workprec(max(prec, eff_prec + 32)):
            try:
                rel = _find_relation(ball.mid, d, eff_prec)
            except ValueError:
                continue
            if all(c == 0 for c in rel) or rel[-1] == 0:
                continue
            if max(abs(c) for c in rel).bit_length() > max_coeff_bits:
                continue
            minpoly = _irreducible_factor_at(rel, ball.mid)
            bound = sum(abs(c) * (abs(ball.mid) + rad) ** k for k, c in enumerate(minpoly))
            val = abs(_poly_eval(minpoly, ball.mid))
            deriv = sum(k * abs(c) * (abs(ball.mid) + rad) ** (k - 1) for k, c in enumerate(minpoly) if k)
            tol = deriv * rad * 4 + bound * mpmath.mpf(2) ** (-eff_prec)
            if val > tol:
                best_err = val
                continue
            certified = True
            residual = val
            if recompute is not None:
                with mpmath.workprec(2 * prec):
                    hi = recompute(2 * prec)
                    hi_ball = hi if isinstance(hi, ComplexBall) else ComplexBall(hi, abs(mpmath.mpc(hi)) * mpmath.mpf(2) ** (-2 * prec + 4))
                    hi_rad = max(hi_ball.rad, mpmath.mpf(2) ** (-2 * prec))
                    v2 = abs(_poly_eval(minpoly, hi_ball.mid))
                    deriv2 = sum(k * abs(c) * (abs(hi_ball.mid) + 1) ** (k - 1) for k, c in enumerate(minpoly) if k)
                    certified = v2 <= deriv2 * hi_rad * 4 + mpmath.mpf(2) ** (-2 * prec + 64) * bound
                    residual = v2
            if certified:
                return RecognitionResult(minpoly, True, float(residual))
    raise RecognitionError(f"no certified relation of degree <= {max_degree} (last residual {best_err})")


def recognize_rational(x, max_den_bits: int | None = None) -> mpq:
    """Best rational approximation of a real number, required to be accurate
    to well beyond what its denominator explains."""
    x = mpmath.mpf(x)
    prec = mpmath.mp.prec
    if max_den_bits is None:
        max_den_bits = prec // 3
    # continued fraction expansion
    h0, h1 = mpz(0), mpz(1)
    k0, k1 = mpz(1), mpz(0)
    y = x
    for _ in range(4 * prec):
        a = mpz(int(mpmath.floor(y)))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1.bit_length() > max_den_bits:
            break
        err = abs(x - mpmath.mpf(h1) / mpmath.mpf(k1))
        size = max(abs(mpmath.mpf(h1)), 1)
        if err <= size * mpmath.mpf(2) ** (-prec + 8) + mpmath.mpf(2) ** (-prec + 8):
            return mpq(h1, k1)
        frac = y - a
        if frac == 0:
            return mpq(h1, k1)
        y = 1 / frac
    raise RecognitionError("value is not a rational with small denominator")


def recognize_qomega(z, slack_bits: int = 32) -> QOmega:
    """Recognize a complex number as r + s*sqrt(-3) with r, s rational."""
    z = mpmath.mpc(z)
    with mpmath.workprec(mpmath.mp.prec - slack_bits):
        r = recognize_rational(z.real)
        s = recognize_rational(z.imag / mpmath.sqrt(3))
    return QOmega.from_sqrt_m3(r, s)
