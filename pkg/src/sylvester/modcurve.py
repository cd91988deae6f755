"""The parametrization X_0(27) -> E_1 by eta quotients, its cusps and
automorphisms, and CM points tau = p*omega/9 with their Galois conjugates.

With f = eta(27z)/eta(3z) and g = (eta(9z)/eta(3z))^4,
    x = 4 g / f^3,   y = 8 / f^3 + 36,
which lands on E_1 : y^2 = x^3 - 432.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from gmpy2 import mpq

from .eisenstein import FormClass, PicGroup, prime_representative
from .ellcurve import E, Point, apply_unit, mordell
from .fields import KummerField, QOmega, to_mpq
from .mpnum import ComplexBall, UpperHalfPoint, eta_anywhere, recognize_qomega

__all__ = [
    "E1",
    "E1_C",
    "CUSPS",
    "cusp_coords",
    "eta_values",
    "param",
    "param_balls",
    "Automorphism",
    "AUTOMORPHISMS",
    "automorphism_apply",
    "CMPointRep",
    "cm_point",
    "transport",
    "cm_conjugates",
    "THETA",
    "witness_values",
    "kronecker_check",
]

E1 = E(1, QOmega)
E1_C = mordell(mpmath.mpc(-432))

CUSPS = ("inf", "0", "1/3", "-1/3", "1/9", "-1/9")


def cusp_coords(label: str) -> Point:
    w = QOmega(0, 1)
    s3 = QOmega(1, 2)
    table = {
        "inf": None,
        "0": (QOmega(12), QOmega(36)),
        "1/3": (12 * w, QOmega(36)),
        "-1/3": (12 * w * w, QOmega(36)),
        "1/9": (QOmega(0), -12 * s3),
        "-1/9": (QOmega(0), 12 * s3),
    }
    if label not in table:
        raise ValueError(f"unknown cusp {label!r}")
    c = table[label]
    return E1.zero() if c is None else Point(E1, c[0], c[1])


def _scaled(tau, m):
    if isinstance(tau, UpperHalfPoint):
        return tau.scale(m)
    return mpmath.mpc(tau) * m


def eta_values(tau, prec: int = 256) -> dict[str, ComplexBall]:
    """f, g, x, y at tau as balls."""
    with mpmath.workprec(prec + 32):
        e3 = eta_anywhere(_scaled(tau, 3), prec + 16)
        e9 = eta_anywhere(_scaled(tau, 9), prec + 16)
        e27 = eta_anywhere(_scaled(tau, 27), prec + 16)
        f = e27 / e3
        g = (e9 / e3) ** 4
        f3inv = f.inverse() ** 3
        x = 4 * g * f3inv
        y = 8 * f3inv + 36
        return {"f": f, "g": g, "x": x, "y": y}


def param_balls(tau, prec: int = 256):
    v = eta_values(tau, prec)
    return v["x"], v["y"]


def param(tau, prec: int = 256) -> Point:
    """Complex point of E_1 at tau (at the caller's working precision)."""
    x, y = param_balls(tau, prec)
    return Point(E1_C, x.mid, y.mid)


# --------------------------------------------------------------------------
# Automorphisms


@dataclass(frozen=True)
class Automorphism:
    symbol: str
    matrix: tuple  # ((a, b), (c, d)) with rational entries
    unit: int  # exponent k of the unit: -1 encoded as 3
    translation: str  # cusp label

    def act_tau(self, tau):
        (a, b), (c, d) = self.matrix
        t = tau.to_mpc() if isinstance(tau, UpperHalfPoint) else mpmath.mpc(tau)
        a, b, c, d = (mpmath.mpf(int(to_mpq(v).numerator)) / int(to_mpq(v).denominator) for v in (a, b, c, d))
        return (a * t + b) / (c * t + d)


AUTOMORPHISMS = {
    "A": Automorphism("A", ((1, to_mpq("1/3")), (0, 1)), 1, "inf"),
    "W": Automorphism("W", ((0, 1), (-27, 0)), 3, "0"),
    "B": Automorphism("B", ((1, 0), (9, 1)), 2, "1/9"),
    "C": Automorphism("C", ((4, to_mpq("1/3")), (9, 1)), 0, "1/9"),
}


def automorphism_apply(a, P: Point) -> Point:
    """The affine action u*P + T of a modular automorphism on E_1."""
    if isinstance(a, str):
        a = AUTOMORPHISMS[a]
    if a.unit == 3:
        Q = -P
    else:
        Q = apply_unit(a.unit, P)
    T = cusp_coords(a.translation)
    if not P.is_zero() and isinstance(P.x, (mpmath.mpc, mpmath.mpf)):
        T = T.to_complex() if not T.is_zero() else T
        if T.is_zero():
            return Q
        return Q + Point(Q.curve, T.x, T.y)
    if Q.is_zero():
        return T
    return Q + T


# --------------------------------------------------------------------------
# CM points and their conjugates


@dataclass
class CMPointRep:
    p: int
    tau: UpperHalfPoint
    cls: FormClass
    level: int = 27
    gamma: tuple = field(default=((1, 0), (0, 1)))


def cm_point(p: int) -> UpperHalfPoint:
    return UpperHalfPoint(QOmega(0, p) / 9)


def _coords(v: QOmega):
    return (v.a, v.b)


def _lattice_basis(gens):
    """Z-basis (2 vectors) of the lattice spanned by rational pairs."""
    den = 1
    for a, b in gens:
        den = math.lcm(den, int(to_mpq(a).denominator), int(to_mpq(b).denominator))
    rows = [(int(a * den), int(b * den)) for a, b in gens]
    h = _hnf_rows(rows)
    return [(to_mpq(a) / den, to_mpq(b) / den) for a, b in h], den


def _hnf_rows(rows):
    """Two rows (x1, y1), (0, y2)... returned as a basis [(a, b), (0, d)]."""
    # column 0 gcd reduction
    rows = [list(r) for r in rows if r != (0, 0)]
    # bring gcd of first coordinates into rows[0]
    piv = None
    rest = []
    for r in rows:
        if piv is None:
            piv = r
            continue
        a, b = piv[0], r[0]
        if b == 0:
            rest.append(r)
            continue
        g, s, t = _xgcd(a, b)
        new_piv = [s * piv[0] + t * r[0], s * piv[1] + t * r[1]]
        other = [(b // g) * piv[0] - (a // g) * r[0], (b // g) * piv[1] - (a // g) * r[1]]
        piv = new_piv
        rest.append(other)
    d = 0
    for r in rest:
        if r[0] != 0:
            raise AssertionError("elimination failed")
        d = math.gcd(d, r[1])
    if piv[0] < 0:
        piv = [-piv[0], -piv[1]]
    return [tuple(piv), (0, d)]


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _solve2(basis, v):
    """Integer coordinates of v in the rational basis (2x2)."""
    (a, b), (c, d) = basis
    det = a * d - b * c
    x = (v[0] * d - v[1] * c) / det
    y = (a * v[1] - b * v[0]) / det
    if to_mpq(x).denominator != 1 or to_mpq(y).denominator != 1:
        raise AssertionError("vector not in lattice")
    return int(x), int(y)


def _smith2(T):
    """U, V unimodular with U T V = diag(d1, d2), d1 | d2 (2x2 integer)."""
    import sympy

    M = sympy.Matrix(T)
    U = sympy.eye(2)
    V = sympy.eye(2)
    for _ in range(200):
        # make M[0,0] the gcd of the first row and column
        changed = False
        if M[0, 1] != 0:
            g, s, t = _xgcd(int(M[0, 0]), int(M[0, 1]))
            a, b = int(M[0, 0]) // g, int(M[0, 1]) // g
            C = sympy.Matrix([[s, -b], [t, a]])
            M, V = M * C, V * C
            changed = True
        if M[1, 0] != 0:
            g, s, t = _xgcd(int(M[0, 0]), int(M[1, 0]))
            a, b = int(M[0, 0]) // g, int(M[1, 0]) // g
            R = sympy.Matrix([[s, t], [-b, a]])
            M, U = R * M, R * U
            changed = True
        if not changed:
            if int(M[1, 1]) % int(M[0, 0]) != 0:
                R = sympy.Matrix([[1, 1], [0, 1]])
                M, U = R * M, R * U
                continue
            break
    return U, M, V


def transport(p: int, cls: FormClass, level: int = 27) -> UpperHalfPoint:
    """A point tau' of level-``level`` type representing P_tau^{sigma_cls}.

    The class acts on the pair (Z tau + Z, Z tau + Z/level) through the
    conjugate of a prime ideal in the class.
    """
    tau = cm_point(p).value
    c = 9 * p
    group_D = -3 * c * c
    if cls.disc != group_D:
        raise ValueError("class has the wrong discriminant")
    if cls == _principal(group_D):
        return UpperHalfPoint(tau)
    rep, _ = prime_representative(cls, 6 * p * level)
    A = rep.A
    beta = QOmega.from_sqrt_m3(to_mpq(-rep.B) / 2, to_mpq(c) / 2)
    ideal = [QOmega(A), beta.conj()]
    lam = [tau, QOmega(1)]
    lam2 = [tau, QOmega(to_mpq(1) / level)]
    gens_M = [_coords(i * l) for i in ideal for l in lam]
    gens_M2 = [_coords(i * l) for i in ideal for l in lam2]
    basis2, _ = _lattice_basis(gens_M2)
    basisM, _ = _lattice_basis(gens_M)
    T = [_solve2(basis2, v) for v in basisM]
    U, S, V = _smith2(T)
    d1, d2 = abs(int(S[0, 0])), abs(int(S[1, 1]))
    if (d1, d2) != (1, level):
        raise ArithmeticError("structure-transport-failure: quotient is not cyclic of the right order")
    Vinv = V.inv()
    e = [QOmega(*basis2[0]), QOmega(*basis2[1])]
    f1 = e[0] * int(Vinv[0, 0]) + e[1] * int(Vinv[0, 1])
    f2 = e[0] * int(Vinv[1, 0]) + e[1] * int(Vinv[1, 1])
    # M = Z f1 + Z level f2 up to the sign conventions of S
    new = f1 / (f2 * level)
    if new.b < 0:
        new = -new
    return UpperHalfPoint(new)


def _principal(D):
    from .eisenstein import principal_form

    return principal_form(D).reduce()


def cm_conjugates(p: int, classes, prec: int = 256, level: int = 27, values=("x", "y")):
    """Numeric values of the listed eta quotients at the conjugates P_tau^sigma."""
    out = []
    for cls in classes:
        t = transport(p, cls, level)
        v = eta_values(t, prec)
        out.append({k: v[k] for k in values})
    return out


# --------------------------------------------------------------------------
# Kronecker congruences v(p tau) = v(tau)^p at primes above p, tau = omega/9

_K3 = KummerField([3])
_CBRT3 = _K3.gen(0)
# theta = 3^(1/6) e^(pi i/6), theta^6 = -3, written in K(cbrt 3)
THETA = _CBRT3 * _CBRT3 * (QOmega(1, 2) * QOmega(0, 1)) * mpq(-1, 3)
KRONECKER_LEVEL = {"f": 81, "g": 81, "x": 27, "y": 27}


def witness_values() -> dict:
    """Exact values of f, g, x, y at omega/9 in K(cbrt 3)."""
    s3 = QOmega(1, 2)
    w = QOmega(0, 1)
    return {
        "f": _K3(-(w * w) / s3),
        "g": THETA.inverse() ** 2,
        "x": THETA * 12,
        "y": THETA**3 * 24 + 36,
    }


def stated_residues() -> dict:
    """Residues stated for p = 5 (x) and p = 2 (y): -4 3^(7/6) e^(5 pi i/6) and -24 sqrt(-3) + 36."""
    w = QOmega(0, 1)
    return {(5, "x"): THETA * (-12) * w, (2, "y"): _K3(QOmega(36) - 24 * QOmega(1, 2))}


def _kronecker_value(p: int, target: str, prec: int):
    """F(w_i^p) for the three conjugates w_i of v(omega/9), F = prod over Pic(O_9p) of (T - v(P_t))."""
    level = KRONECKER_LEVEL[target]
    G = PicGroup(9 * p)
    wp = witness_values()[target] ** p
    with mpmath.workprec(prec):
        vals = [eta_values(transport(p, f, level), prec)[target].mid for f in G.elements]
        out = []
        for i in range(3):
            a = wp.galois((i,)).to_complex()
            prod = mpmath.mpc(1)
            for v in vals:
                prod *= a - v
            out.append(prod)
    return out


def _recognize_k3(values, prec: int):
    with mpmath.workprec(prec):
        w = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        mv = _K3.monomial_values()
        elt = _K3.zero()
        big = max(int(mpmath.log(abs(v) + 1, 2)) for v in values)
        for j in range(3):
            s = sum(w ** (-(i * j) % 3) * values[i] for i in range(3)) / (3 * mv[j])
            elt = elt + _K3.monomial((j,), recognize_qomega(s, 64 + big))
    return elt


def kronecker_check(p: int, target: str, prec: int | None = None, cap: int = 16384) -> dict:
    """Check v(p omega/9) = v(omega/9)^p modulo a prime above p for v in {f, g, x, y}.

    The value F(v(omega/9)^p) of the characteristic polynomial of v(p omega/9)
    over K is recognized exactly in K(cbrt 3); it must have positive valuation
    at a prime above p.  f and g must also be p-adic units at omega/9.
    """
    from .mpnum import PrecisionError, RecognitionError
    from .residue import ResidueMap

    if p == 3 or (p != 2 and p % 3 != 2):
        raise ValueError("p must be inert in K")
    wv = witness_values()[target]
    with mpmath.workprec(64):
        size = 0
        for i in range(3):
            size = max(size, float(mpmath.log(abs(wv.galois((i,)).to_complex()) + 2, 2)))
    start = prec or max(512, int(3 * (p + 1) * (p * size + 64)))
    value = None
    pr = start
    while pr <= cap:
        try:
            a = _recognize_k3(_kronecker_value(p, target, pr), pr)
            b = _recognize_k3(_kronecker_value(p, target, 2 * pr), 2 * pr)
            if a == b:
                value = a
                break
        except RecognitionError:
            pass
        pr *= 2
    if value is None:
        raise PrecisionError(f"recognition-failed for {target} at p = {p} up to {cap} bits")
    primes = []
    for idx in range(3):
        R = ResidueMap(p, _K3, idx)
        rec = {"prime_index": idx, "valuation": str(R.valuation(value))}
        rec["congruent"] = R.valuation(value) > 0
        rec["unit_at_omega/9"] = R.valuation(wv) == 0
        tgt = stated_residues().get((p, target))
        if tgt is not None:
            rec["matches_stated_residue"] = R.valuation(wv**p - tgt) > 0
        primes.append(rec)
    ok = any(r["congruent"] for r in primes)
    if target in ("f", "g"):
        ok = ok and all(r["unit_at_omega/9"] for r in primes)
    if (p, target) in stated_residues():
        ok = ok and any(r["congruent"] and r["matches_stated_residue"] for r in primes)
    return {"p": p, "target": target, "pass": ok, "precision": pr, "primes": primes, "value": value}
