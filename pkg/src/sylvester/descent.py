"""Descent by the 3-isogeny between E: y^2 = x^3 - 432 D^2 and E': y^2 = x^3 + 16 D^2.

phi: E -> E' has kernel {O, (0, +-12 D sqrt(-3))}; its dual phi': E' -> E has
kernel generated by the rational point T = (0, 4D).

* Sel_phi sits in Q*/Q*^3.  The class d comes from y - 4D on E', and the
  torsor is d^2 V^3 - d U^3 = 8 D Z^3.
* Sel_phi' sits in the norm-cube classes of K*/K*^3, which for the D used
  here are {1, omega, omega^2}.  alpha comes from y - 12 D sqrt(-3) on E, and
  the torsor is the sqrt(-3)-coefficient of alpha (u + v sqrt(-3))^3 plus
  12 D Z^3.

dim Sel_3(E) = dim Sel_phi + dim Sel_phi' - dim(E'(Q)[phi'] / phi(E(Q)[3])).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import sympy
from gmpy2 import mpq

from .ellcurve import E, Point, cube_free_part, mordell
from .fields import QOmega

__all__ = [
    "IsogenyPair",
    "isogeny_pair",
    "TernaryCubic",
    "phi_torsor",
    "phi_prime_torsor",
    "locally_solvable",
    "everywhere_locally_solvable",
    "phi_selmer",
    "sel3_dim",
    "descent_class",
]


@dataclass(frozen=True)
class IsogenyPair:
    D: int

    @property
    def E(self):
        return E(self.D)

    @property
    def Eprime(self):
        return mordell(16 * self.D * self.D)

    def phi(self, P: Point) -> Point:
        """E -> E', (x, y) -> ((x^3 - 1728 D^2) / (9 x^2), y (x^3 + 3456 D^2) / (27 x^3))."""
        Ep = self.Eprime
        if P.is_zero() or P.x == 0:
            return Ep.zero()
        D2 = self.D * self.D
        x, y = P.x, P.y
        return Point(Ep, (x**3 - 1728 * D2) / (9 * x * x), y * (x**3 + 3456 * D2) / (27 * x**3))

    def phi_prime(self, P: Point) -> Point:
        """E' -> E with kernel <(0, 4D)>: (x + 4k/x^2, y (1 - 8k/x^3)) with k = 16 D^2."""
        Et = self.E
        if P.is_zero() or P.x == 0:
            return Et.zero()
        k = 16 * self.D * self.D
        x, y = P.x, P.y
        return Point(Et, x + 4 * k / (x * x), y * (1 - 8 * k / x**3))

    @property
    def torsion_point(self) -> Point:
        return Point(self.Eprime, mpq(0), mpq(4 * self.D))


def isogeny_pair(D: int) -> IsogenyPair:
    return IsogenyPair(int(D))


def descent_class(P: Point, D: int) -> int:
    """Cube-free representative of y - 4D in Q*/Q*^3 for P on E' (T maps to D^2)."""
    if P.is_zero():
        return 1
    y = mpq(P.y)
    v = y - 4 * D
    if v == 0:
        v = mpq(1, 8 * D)
    num, den = int(v.numerator), int(v.denominator)
    # -1 is a cube
    return abs(cube_free_part(num * den * den))


# --------------------------------------------------------------------------
# ternary cubic forms and local solvability


class TernaryCubic:
    """Integral cubic form as {(i, j, k): c} meaning c X^i Y^j Z^k."""

    def __init__(self, terms: dict):
        self.terms = {e: int(c) for e, c in terms.items() if c}

    def __call__(self, x, y, z):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.terms.items())

    def grad(self, x, y, z):
        gx = sum(c * i * x ** (i - 1) * y**j * z**k for (i, j, k), c in self.terms.items() if i)
        gy = sum(c * j * x**i * y ** (j - 1) * z**k for (i, j, k), c in self.terms.items() if j)
        gz = sum(c * k * x**i * y**j * z ** (k - 1) for (i, j, k), c in self.terms.items() if k)
        return gx, gy, gz

    def transform(self, M) -> TernaryCubic:
        """Form F(M (X, Y, Z)^T) for an integer 3x3 matrix M."""
        X, Y, Z = sympy.symbols("X Y Z")
        lin = [M[r][0] * X + M[r][1] * Y + M[r][2] * Z for r in range(3)]
        expr = sympy.expand(sum(c * lin[0] ** i * lin[1] ** j * lin[2] ** k for (i, j, k), c in self.terms.items()))
        poly = sympy.Poly(expr, X, Y, Z)
        return TernaryCubic({m: int(c) for m, c in poly.terms()})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def __repr__(self):
        return f"TernaryCubic({self.terms})"


def phi_torsor(d: int, D: int) -> TernaryCubic:
    """d^2 V^3 - d U^3 - 8 D Z^3 in variables (U, V, Z)."""
    return TernaryCubic({(3, 0, 0): -d, (0, 3, 0): d * d, (0, 0, 3): -8 * D})


def phi_prime_torsor(k: int, D: int) -> TernaryCubic:
    """2 * (sqrt(-3)-part of omega^k (u + v sqrt(-3))^3) + 24 D Z^3."""
    s = QOmega(1, 2)
    alpha = QOmega(0, 1) ** k
    # (u + v s)^3 = u^3 + 3 u^2 v s + 3 u v^2 s^2 + v^3 s^3, with s^2 = -3
    mon = {(3, 0): QOmega(1), (2, 1): 3 * s, (1, 2): QOmega(-9), (0, 3): -3 * s}
    terms = {}
    for (i, j), c in mon.items():
        _, im = (alpha * c).sqrt_m3_parts()
        terms[(i, j, 0)] = int(2 * im)
    terms[(0, 0, 3)] = 24 * D
    return TernaryCubic(terms)


def _v(n: int, q: int) -> int:
    if n == 0:
        return 10**6
    k = 0
    while n % q == 0:
        n //= q
        k += 1
    return k


def _normalize_diagonal(F: TernaryCubic, q: int) -> TernaryCubic:
    """Shift q-valuations of a diagonal form into {0, 1, 2} and remove common q-content."""
    if any(sum(1 for t in e if t) != 1 for e in F.terms):
        return F
    terms = {}
    for e, c in F.terms.items():
        while c % q**3 == 0:
            c //= q**3
        terms[e] = c
    g = 0
    for c in terms.values():
        g = math.gcd(g, c)
    while g % q == 0:
        terms = {e: c // q for e, c in terms.items()}
        g //= q
    return TernaryCubic(terms)


def locally_solvable(F: TernaryCubic, q: int, max_depth: int | None = None) -> bool:
    """F = 0 has a nonzero solution over Q_q, by Hensel-certified search mod q^m."""
    F = _normalize_diagonal(F, q)
    if max_depth is None:
        vmax = max(_v(c, q) for c in F.terms.values())
        max_depth = 2 * (vmax + (3 if q == 3 else 1)) + 3
    charts = (
        lambda s, t: (1, s, t),
        lambda s, t: (q * s, 1, t),
        lambda s, t: (q * s, q * t, 1),
    )
    for chart in charts:
        stack = [(s, t, 1) for s in range(q) for t in range(q)]
        while stack:
            s, t, m = stack.pop()
            x = chart(s, t)
            val = _v(F(*x), q)
            g = min(_v(c, q) for c in F.grad(*x))
            if val > 2 * g:
                return True
            if val < m or m >= max_depth:
                continue
            qm = q**m
            for a in range(q):
                for b in range(q):
                    stack.append((s + a * qm, t + b * qm, m + 1))
    return False


def _support_primes(D: int):
    return sorted(set(sympy.factorint(6 * abs(D))))


def everywhere_locally_solvable(F: TernaryCubic, D: int, extra_places=()) -> bool:
    # odd-degree forms always have real zeros
    places = list(_support_primes(D)) + [int(q) for q in extra_places]
    return all(locally_solvable(F, q) for q in places)


def _phi_candidates(D: int):
    primes = _support_primes(D)
    out = []
    for exps in itertools.product(range(3), repeat=len(primes)):
        d = 1
        for q, e in zip(primes, exps):
            d *= q**e
        out.append(d)
    return sorted(out)


def phi_selmer(D: int, direction: str = "phi", extra_places=()) -> list:
    """Selmer classes: cube-free d for 'phi', unit exponents k (alpha = omega^k) for 'phi_prime'."""
    D = int(D)
    if direction == "phi":
        return [d for d in _phi_candidates(D) if everywhere_locally_solvable(phi_torsor(d, D), D, extra_places)]
    if direction == "phi_prime":
        return [k for k in range(3) if everywhere_locally_solvable(phi_prime_torsor(k, D), D, extra_places)]
    raise ValueError("direction must be 'phi' or 'phi_prime'")


def _dim3(size: int) -> int:
    d = round(math.log(size, 3))
    if 3**d != size:
        raise ArithmeticError(f"Selmer group of size {size} is not a power of 3")
    return d


def sel3_dim(n: int, extra_places=()) -> dict:
    """dim Sel_3(E_n) from the two isogeny Selmer groups (E' has the rational 3-torsion point)."""
    s_phi = phi_selmer(n, "phi", extra_places)
    s_phip = phi_selmer(n, "phi_prime", extra_places)
    # E(Q)[3] = 0 unless n is a cube or twice a cube; E'(Q)[phi'] = Z/3
    correction = 0 if cube_free_part(n) == 1 else 1
    dim = _dim3(len(s_phi)) + _dim3(len(s_phip)) - correction
    return {"n": n, "sel_phi": s_phi, "sel_phi_prime": s_phip, "dim": dim, "correction": correction}
