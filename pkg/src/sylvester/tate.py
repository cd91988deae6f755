"""Tate's algorithm over Q: Kodaira symbols, conductor exponents, Tamagawa
numbers and globally minimal models for integral Weierstrass equations."""
from __future__ import annotations

from dataclasses import dataclass

import sympy
from gmpy2 import mpq

from .ellcurve import Curve, E

__all__ = ["LocalData", "tate_local", "minimal_model", "conductor", "Transform"]


def _v(x, p: int) -> int:
    x = int(x)
    if x == 0:
        return 10**9
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def _roots_mod(coeffs, p: int) -> list[int]:
    """Roots in F_p of the polynomial with coefficients (highest first)."""
    if p < 5000:
        out = []
        for r in range(p):
            acc = 0
            for c in coeffs:
                acc = (acc * r + c) % p
            if acc == 0:
                out.append(r)
        return out
    x = sympy.Symbol("x")
    poly = sympy.Poly(coeffs, x, modulus=p)
    _, facs = poly.factor_list()
    out = []
    for f, _ in facs:
        if f.degree() == 1:
            a, b = [int(c) for c in f.all_coeffs()]
            out.append((-b * pow(a, -1, p)) % p)
    return sorted(out)


@dataclass(frozen=True)
class Transform:
    u: object = 1
    r: object = 0
    s: object = 0
    t: object = 0

    def then(self, other: Transform) -> Transform:
        """Apply self, then other (other expressed in self's new coordinates)."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Transform(u1 * u2, u1 * u1 * r2 + r1, u1 * s2 + s1, u1 ** 3 * t2 + s1 * u1 * u1 * r2 + t1)

    def apply_curve(self, C: Curve) -> Curve:
        return C.change(self.u, self.r, self.s, self.t)

    def apply_point(self, P, target: Curve):
        return P.curve.change_point(P, target, self.u, self.r, self.s, self.t)


@dataclass
class LocalData:
    p: int
    kodaira: str
    f: int
    c: int
    disc_valuation: int
    model: Curve
    transform: Transform


def _ints(C: Curve):
    out = []
    for a in C.a:
        a = mpq(a)
        if a.denominator != 1:
            raise ValueError("model is not integral")
        out.append(int(a))
    return out


def tate_local(C: Curve, p: int) -> LocalData:
    """Tate's algorithm at p on an integral model; returns data at the minimal model."""
    total = Transform()
    cur = C
    while True:
        a1, a2, a3, a4, a6 = _ints(cur)
        D = int(cur.discriminant())
        n = _v(D, p)
        if n == 0:
            return LocalData(p, "I0", 0, 1, 0, cur, total)

        def change(r=0, s=0, t=0, u=1):
            nonlocal cur, total, a1, a2, a3, a4, a6
            tr = Transform(u, r, s, t)
            cur = tr.apply_curve(cur)
            total = total.then(tr)
            a1, a2, a3, a4, a6 = _ints(cur)

        b2, b4, b6, b8 = cur.b_invariants()
        # move the singular point of the reduction to (0, 0)
        if p == 2:
            if int(b2) % 2 == 0:
                r = a4 % 2
                t = (r * (1 + a2 + a4) + a6) % 2
            else:
                r = a3 % 2
                t = (r + a4) % 2
        elif p == 3:
            r = (-int(b6)) % 3 if int(b2) % 3 == 0 else (-int(b2) * int(b4)) % 3
            t = (a1 * r + a3) % 3
        else:
            c4, c6 = (int(v) for v in cur.c_invariants())
            if c4 % p == 0:
                r = (-int(b2) * pow(12, -1, p)) % p
            else:
                r = (-(c6 + int(b2) * c4) * pow(12 * c4, -1, p)) % p
            t = (-(a1 * r + a3) * pow(2, -1, p)) % p
        change(r=r, t=t)
        b2, b4, b6, b8 = cur.b_invariants()

        if int(b2) % p != 0:
            # multiplicative reduction
            if p == 2:
                split = _roots_mod([1, a1 % 2, (-a2) % 2], 2) != []
            else:
                split = sympy.legendre_symbol(int(b2) % p, p) == 1
            c = n if split else (2 if n % 2 == 0 else 1)
            return LocalData(p, f"I{n}", 1, c, n, cur, total)
        if _v(a6, p) < 2:
            return LocalData(p, "II", n, 1, n, cur, total)
        if _v(b8, p) < 3:
            return LocalData(p, "III", n - 1, 2, n, cur, total)
        if _v(b6, p) < 3:
            c = 3 if _quad_has_two_roots(a3 // p, a6 // (p * p), p) else 1
            return LocalData(p, "IV", n - 2, c, n, cur, total)

        # arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s, t = a2 % 2, 2 * ((a6 // 4) % 2)
        else:
            half = (p + 1) // 2
            s, t = -a1 * half, -a3 * half
        change(s=s, t=t)
        if not (a1 % p == 0 and a2 % p == 0 and a3 % (p * p) == 0 and a4 % (p * p) == 0 and a6 % p**3 == 0):
            raise AssertionError("normalization before the cubic step failed")

        P2, P1, P0 = a2 // p, a4 // (p * p), a6 // p**3
        cubic = [1, P2 % p, P1 % p, P0 % p]
        roots = _roots_mod(cubic, p)
        mult = _root_multiplicities(cubic, p)
        if _cubic_squarefree(cubic, p):
            return LocalData(p, "I0*", n - 4, 1 + len(roots), n, cur, total)
        if max(mult.values()) == 2:
            # I_m^*: move the double root to 0
            dbl = [r for r, m in mult.items() if m == 2][0]
            change(r=dbl * p)
            a1, a2, a3, a4, a6 = _ints(cur)
            m = 1
            mx, my = p * p, p * p
            while True:
                a2t = a2 // p
                a3t = a3 // my
                a4t = a4 // (p * mx)
                a6t = a6 // (mx * my)
                if _quad_distinct(1, a3t, -a6t, p):
                    c = 4 if _quad_has_two_roots(a3t, a6t, p) else 2
                    break
                t = my * _double_root(1, a3t, -a6t, p)
                change(t=t)
                a1, a2, a3, a4, a6 = _ints(cur)
                my *= p
                m += 1
                a2t = a2 // p
                a4t = a4 // (p * mx)
                a6t = a6 // (mx * my)
                if _quad_distinct(a2t, a4t, a6t, p):
                    c = 4 if _roots_mod([a2t % p, a4t % p, a6t % p], p) else 2
                    break
                r = mx * _double_root(a2t, a4t, a6t, p)
                change(r=r)
                a1, a2, a3, a4, a6 = _ints(cur)
                mx *= p
                m += 1
            return LocalData(p, f"I{m}*", n - m - 4, c, n, cur, total)

        # triple root: move it to 0
        tri = roots[0] if roots else 0
        change(r=tri * p)
        a1, a2, a3, a4, a6 = _ints(cur)
        a3t, a6t = a3 // (p * p), a6 // p**4
        if _quad_distinct(1, a3t, -a6t, p):
            c = 3 if _quad_has_two_roots(a3t, a6t, p) else 1
            return LocalData(p, "IV*", n - 6, c, n, cur, total)
        t = p * p * _double_root(1, a3t, -a6t, p)
        change(t=t)
        a1, a2, a3, a4, a6 = _ints(cur)
        if _v(a4, p) < 4:
            return LocalData(p, "III*", n - 7, 2, n, cur, total)
        if _v(a6, p) < 6:
            return LocalData(p, "II*", n - 8, 1, n, cur, total)
        # not minimal: scale down and restart
        change(u=p)


def _root_multiplicities(coeffs, p: int) -> dict[int, int]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([c % p for c in coeffs], x, modulus=p)
    out = {}
    if poly.is_zero:
        return out
    _, facs = poly.factor_list()
    for f, e in facs:
        if f.degree() == 1:
            a, b = [int(c) for c in f.all_coeffs()]
            out[(-b * pow(a, -1, p)) % p] = e
    return out


def _cubic_squarefree(coeffs, p: int) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly([c % p for c in coeffs], x, modulus=p)
    return sympy.gcd(poly, poly.diff(x)).degree() == 0


def _quad_distinct(a: int, b: int, c: int, p: int) -> bool:
    """a X^2 + b X + c has distinct roots over the algebraic closure of F_p."""
    a, b, c = a % p, b % p, c % p
    if p == 2:
        return b != 0
    return (b * b - 4 * a * c) % p != 0


def _quad_has_two_roots(a3t: int, a6t: int, p: int) -> bool:
    """Y^2 + a3t Y - a6t splits into distinct linear factors over F_p."""
    return len(_roots_mod([1, a3t % p, (-a6t) % p], p)) == 2


def _double_root(a: int, b: int, c: int, p: int) -> int:
    a, b, c = a % p, b % p, c % p
    if p == 2:
        # a X^2 + c with a != 0: the root is sqrt(c/a) = c/a in F_2
        return (c * a) % 2
    return (-b * pow(2 * a, -1, p)) % p


def _integral_model(C: Curve) -> tuple[Curve, Transform]:
    """Scale a rational model to an integral one."""
    tr = Transform()
    cur = C
    den = 1
    for i, a in zip((1, 2, 3, 4, 6), cur.a):
        d = int(mpq(a).denominator)
        for q, e in sympy.factorint(d).items():
            need = -(-e // i)
            while den % q ** need:
                den *= q
    if den != 1:
        step = Transform(mpq(1, den), 0, 0, 0)
        cur = step.apply_curve(cur)
        tr = tr.then(step)
    return cur, tr


def _normalize_small(C: Curve) -> tuple[Curve, Transform]:
    """Reduce a1 to {0,1}, a3 to {0,1}, a2 to {-1,0,1} (standard minimal form)."""
    a1, a2, a3, a4, a6 = _ints(C)
    s = -(a1 - (a1 % 2)) // 2
    a2s = a2 - s * a1 - s * s
    r = -_round_third(a2s)
    a3r = a3 + r * a1
    t = -(a3r - (a3r % 2)) // 2
    tr = Transform(1, r, s, t)
    return tr.apply_curve(C), tr


def _round_third(v: int) -> int:
    q, rem = divmod(v, 3)
    return q + 1 if rem == 2 else q


def minimal_model(C: Curve) -> tuple[Curve, Transform, dict[int, LocalData]]:
    """Globally minimal model of a curve over Q, with the transformation from C."""
    if isinstance(C, (int, mpq)) or not isinstance(C, Curve):
        C = E(C)
    cur, tr = _integral_model(C)
    local = {}
    D = int(cur.discriminant())
    for p in sorted(sympy.factorint(abs(D))):
        data = tate_local(cur, p)
        cur = data.model
        tr = tr.then(data.transform)
    cur, t2 = _normalize_small(cur)
    tr = tr.then(t2)
    D = int(cur.discriminant())
    for p in sorted(sympy.factorint(abs(D))):
        local[p] = tate_local(cur, p)
        if local[p].transform.u != 1:
            raise AssertionError("model is not minimal after reduction")
    return cur, tr, local


def conductor(C) -> int:
    _, _, local = minimal_model(C)
    N = 1
    for p, d in local.items():
        N *= p ** d.f
    return N
