"""Traces of the CM point p*omega/9 on E_1, their eigen-decomposition under
Gal(K(cbrt 3, cbrt p)/K(cbrt 3)), reduction mod p and extraction of cube sums.

Exact points live in F = KummerField([3, p]).  A Galois element of F/K is
labelled by the pair (a, b) of exponents of chi_3 and chi_p; it multiplies
cbrt(3)^i cbrt(p)^j by omega^(a i + b j).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from gmpy2 import mpq

from .eisenstein import PicGroup
from .ellcurve import Curve, E, Point, apply_unit, cm_action
from .fields import Fp2, KummerField, QOmega, to_mpq
from .modcurve import E1_C, param, transport
from .mpnum import PrecisionError, RecognitionError, recognize_qomega
from .residue import NonIntegralError, ResidueMap

__all__ = [
    "DEFAULT_PRECISION_CAP",
    "check_prime",
    "precision_schedule",
    "conjugate_data",
    "recognize_point",
    "trace_point",
    "SpanPoint",
    "HeegnerSet",
    "heegner_set",
    "eigen_projector",
    "eigen_decompose",
    "nontriviality_mod_p",
    "weierstrass_to_cubic",
    "cubic_to_weierstrass",
    "CubeSumRep",
    "descend_eigenpoint",
    "rational_point_from_K",
    "extract_cube_sum",
    "search_cube_sum",
    "is_torsion",
]

DEFAULT_PRECISION_CAP = 4096
TARGETS = ("L3,p", "L3p", "L3p2")


def check_prime(p: int) -> None:
    import sympy

    if not sympy.isprime(p) or p % 9 not in (2, 5):
        raise ValueError(f"p = {p} must be a prime congruent to 2 or 5 mod 9")


def precision_schedule(p: int, start: int | None = None, cap: int = DEFAULT_PRECISION_CAP):
    prec = start or max(256, 64 * (p + 1))
    while prec <= cap:
        yield prec
        prec *= 2


# --------------------------------------------------------------------------
# numeric conjugates


@lru_cache(maxsize=8)
def _group_data(p: int):
    G = PicGroup(9 * p)
    c3, cp = G.character(3), G.character(p)
    return G, c3, cp


@lru_cache(maxsize=16)
def conjugate_data(p: int, prec: int):
    """param(P_tau^sigma) for every class sigma of Pic(O_{9p}), keyed by form."""
    G, _, _ = _group_data(p)
    with mpmath.workprec(prec):
        return {f: param(transport(p, f), prec) for f in G.elements}


def _labels(p: int):
    G, c3, cp = _group_data(p)
    return {f: (c3.exponent(f), cp.exponent(f)) for f in G.elements}


def _numeric_traces(p: int, prec: int, kernel_label) -> dict:
    """Sum the conjugates over each coset of the kernel described by its labels.

    ``kernel_label`` maps a label (a, b) to a coset key; values are summed per key.
    """
    pts = conjugate_data(p, prec)
    labels = _labels(p)
    out = {}
    with mpmath.workprec(prec):
        for f, P in pts.items():
            key = kernel_label(labels[f])
            out[key] = out.get(key, E1_C.zero()) + P
    return out


# --------------------------------------------------------------------------
# exact recognition


def _omega_c():
    return mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)


def recognize_point(values: dict, F: KummerField, support, prec: int, slack_bits: int = 32) -> Point:
    """Exact point of E_1(F) from its numeric conjugates.

    ``values`` maps Galois labels (a group of exponent vectors) to complex
    points; ``support`` lists the monomials allowed in each coordinate, given
    as {'x': [...], 'y': [...]}.  Coefficients come from inverting the
    character table and are recognized in K.
    """
    if any(P.is_zero() for P in values.values()):
        if all(P.is_zero() for P in values.values()):
            return E(1, F).zero()
        raise RecognitionError("some but not all conjugates vanish")
    n = len(values)
    with mpmath.workprec(prec):
        w = _omega_c()
        mvals = dict(zip(F.monomials, F.monomial_values()))
        coords = {}
        for c in ("x", "y"):
            elt = F.zero()
            for m in support[c]:
                s = mpmath.mpc(0)
                for g, P in values.items():
                    t = sum(gi * mi for gi, mi in zip(g, m)) % 3
                    s += w ** (-t) * getattr(P, c)
                s /= n * mvals[m]
                elt = elt + F.monomial(m, recognize_qomega(s, slack_bits))
            coords[c] = elt
    C = E(1, F)
    P = Point(C, coords["x"], coords["y"])
    if not C.contains(P):
        raise RecognitionError("recognized point is not on E_1")
    tol = mpmath.mpf(2) ** (-prec // 3)
    with mpmath.workprec(prec):
        for g, Pn in values.items():
            Q = P.map(lambda v: v.galois(g))
            if abs(Q.x.to_complex() - Pn.x) > tol * (1 + abs(Pn.x)) or abs(Q.y.to_complex() - Pn.y) > tol * (1 + abs(Pn.y)):
                raise RecognitionError("recognized point does not match its conjugates")
    return P


def _support(kind: str):
    full = [(i, j) for i in range(3) for j in range(3)]
    if kind == "L3,p":
        return {"x": full, "y": full}
    if kind == "L3p":
        s = [(i, i) for i in range(3)]
    elif kind == "L3p2":
        s = [(i, (2 * i) % 3) for i in range(3)]
    else:
        raise ValueError(f"unknown target {kind!r}")
    return {"x": s, "y": s}


def _coset_keys(kind: str):
    """(kernel label -> coset key, coset key -> Galois label on F)."""
    if kind == "L3,p":
        return (lambda ab: ab), (lambda key: key)
    if kind == "L3p":
        # kernel of chi_3 chi_p: a + b = 0; cosets indexed by a + b, represented by (k, 0)
        return (lambda ab: (ab[0] + ab[1]) % 3), (lambda k: (k, 0))
    # kernel of chi_3 chi_p^2: a = b; cosets indexed by a - b, represented by (k, 0)
    return (lambda ab: (ab[0] - ab[1]) % 3), (lambda k: (k, 0))


def _slack(p: int, prec: int) -> int:
    """Bits lost when summing conjugates: cancellation grows with their size."""
    with mpmath.workprec(64):
        big = max(int(mpmath.log(abs(P.x) + 1, 2)) for P in conjugate_data(p, prec).values() if not P.is_zero())
    return 96 + 2 * big + (p + 1).bit_length()


def trace_point(p: int, target: str = "L3,p", prec: int | None = None, cap: int = DEFAULT_PRECISION_CAP) -> Point:
    """Trace of P_tau from H_{9p} down to L_(3,p), L_(3p) or L_(3p^2), as an exact point.

    The trace to L_(3p) runs over the kernel of chi_3 chi_p and the trace to
    L_(3p^2) over the kernel of chi_3 chi_p^2.  Precision is doubled until
    recognition certifies, up to ``cap`` bits.
    """
    check_prime(p)
    F = KummerField([3, p])
    key_of, label_of = _coset_keys(target)
    last = None
    for pr in precision_schedule(p, prec, cap):
        sums = _numeric_traces(p, pr, key_of)
        values = {label_of(k): P for k, P in sums.items()}
        try:
            return recognize_point(values, F, _support(target), pr, _slack(p, pr))
        except RecognitionError as exc:
            last = exc
    raise PrecisionError(f"recognition of the trace to {target} failed up to {cap} bits: {last}")


# --------------------------------------------------------------------------
# rational span and eigen-decomposition


@dataclass(frozen=True)
class SpanPoint:
    """(1/denominator) * point in E(F) tensor Q."""

    point: Point
    denominator: int = 1

    def cleared(self, d: int) -> Point:
        """d times this element, for d a multiple of the denominator."""
        if d % self.denominator:
            raise ValueError("d must be a multiple of the denominator")
        return self.point * (d // self.denominator)

    def __add__(self, other: SpanPoint) -> SpanPoint:
        d = math.lcm(self.denominator, other.denominator)
        return SpanPoint(self.cleared(d) + other.cleared(d), d)

    def equals_mod_torsion(self, other: SpanPoint) -> bool:
        d = math.lcm(self.denominator, other.denominator)
        diff = self.cleared(d) - other.cleared(d)
        return (diff * 3).is_zero() or diff.is_zero()


def _galois_point(P: Point, g) -> Point:
    return P.map(lambda v: v.galois(g))


TAU = (0, 1)  # generator of Gal(L_(3,p)/L_(3)): fixes cbrt 3, moves cbrt p by omega


def eigen_projector(P: Point, k: int) -> Point:
    """3 times the projection of P to the chi_p^k eigenspace under <tau>.

    sum_j [omega^(-j k)] P^(tau^j), exact (no division needed).
    """
    out = P.curve.zero()
    for j in range(3):
        Q = _galois_point(P, (0, j))
        out = out + apply_unit((-j * k) % 3, Q)
    return out


@dataclass
class HeegnerSet:
    p: int
    z: Point
    R1: Point
    R2: Point
    z1: SpanPoint
    z2: SpanPoint
    alpha0: Point
    discrepancy: Point  # R1 + R2 - 3z
    precision: int = 0
    notes: list = field(default_factory=list)


def eigen_decompose(z: Point) -> tuple[SpanPoint, SpanPoint, Point]:
    """(z1, z2, alpha0) with z = z1 + z2 + alpha0/3 in the rational span.

    z1 is the chi_p-eigen part, z2 the chi_p^{-1} part and alpha0 the trace of
    z to L_(3), which lies in E_1(K(cbrt 3)).
    """
    R1 = eigen_projector(z, 1)
    R2 = eigen_projector(z, 2)
    alpha0 = eigen_projector(z, 0)
    return SpanPoint(R1, 3), SpanPoint(R2, 3), alpha0


def heegner_set(p: int, prec: int | None = None, cap: int = DEFAULT_PRECISION_CAP, check_traces: bool = True) -> HeegnerSet:
    """z, R1, R2 and the decomposition, with R1, R2 computed both ways when asked."""
    z = trace_point(p, "L3,p", prec, cap)
    z1, z2, alpha0 = eigen_decompose(z)
    notes = []
    if check_traces:
        R1 = trace_point(p, "L3p", prec, cap)
        R2 = trace_point(p, "L3p2", prec, cap)
        if R1 != z1.point or R2 != z2.point:
            raise ArithmeticError("traces to L_(3p), L_(3p^2) disagree with the eigen-decomposition of z")
        notes.append("R1, R2 recognized directly and equal to 3 z1, 3 z2")
    else:
        R1, R2 = z1.point, z2.point
    disc = R1 + R2 - z * 3
    return HeegnerSet(p, z, R1, R2, z1, z2, alpha0, disc, prec or 0, notes)


# --------------------------------------------------------------------------
# reduction mod p


def _minimal_model_point(P: Point):
    """(x, y) on y^2 + y = x^3 - 7 from y^2 = x^3 - 432: x' = x/4, y' = (y - 4)/8."""
    return P.x * mpq(1, 4), (P.y - 4) * mpq(1, 8)


def nontriviality_mod_p(z: Point, p: int, index: int | None = None) -> dict:
    """Reduce z on the minimal model of E_1 at primes above p and test it.

    Returns per-prime reports {order3, primitive, nonzero} and a summary over
    the three primes above p (or the single one chosen by ``index``).
    """
    F = z.x.field if hasattr(z.x, "field") else KummerField([3, p])
    reports = []
    for idx in ([index] if index is not None else range(3)):
        rep = {"prime_index": idx}
        if z.is_zero():
            rep.update(nonzero=False, order3=True, primitive=False)
            reports.append(rep)
            continue
        red = ResidueMap(p, F, idx)
        x, y = _minimal_model_point(z)
        try:
            xb, yb = red(F(x) if not hasattr(x, "field") else x), red(F(y) if not hasattr(y, "field") else y)
        except NonIntegralError:
            rep.update(nonzero=False, order3=True, primitive=False, note="reduces to O")
            reports.append(rep)
            continue
        Cp = Curve(Fp2(p, 0, 0), Fp2(p, 0, 0), Fp2(p, 1, 0), Fp2(p, 0, 0), Fp2(p, -7, 0))
        Pb = Point(Cp, xb, yb)
        if not Cp.contains(Pb):
            raise AssertionError("reduction is off the curve")
        rep["point"] = (str(xb), str(yb))
        rep["nonzero"] = True
        rep["order3"] = (Pb * 3).is_zero()
        rep["primitive"] = rep["order3"] and not cm_action("sqrt-3", Pb).is_zero()
        reports.append(rep)
    ok = [r for r in reports if r["primitive"]]
    return {
        "p": p,
        "order3": bool(ok) or all(r["order3"] for r in reports),
        "primitive": bool(ok),
        "all_primes_primitive": len(ok) == len(reports),
        "primes": reports,
    }


# --------------------------------------------------------------------------
# cube sums


@dataclass(frozen=True)
class CubeSumRep:
    """a^3 + b^3 = n with a = A/C, b = B/C in lowest terms."""

    A: int
    B: int
    C: int
    n: int

    @property
    def a(self) -> mpq:
        return mpq(self.A, self.C)

    @property
    def b(self) -> mpq:
        return mpq(self.B, self.C)

    def check(self) -> bool:
        return self.A**3 + self.B**3 == self.n * self.C**3 and self.A != 0 and self.B != 0

    def to_json(self) -> dict:
        return {"n": self.n, "a": str(self.a), "b": str(self.b), "A": self.A, "B": self.B, "C": self.C, "verified": self.check()}


def _primitive_triple(a, b, c):
    a, b, c = (to_mpq(t) for t in (a, b, c))
    den = math.lcm(int(a.denominator), int(b.denominator), int(c.denominator))
    A, B, C = (int(t * den) for t in (a, b, c))
    g = math.gcd(math.gcd(A, B), C)
    A, B, C = A // g, B // g, C // g
    if C < 0:
        A, B, C = -A, -B, -C
    return A, B, C


def weierstrass_to_cubic(P: Point, n) -> tuple[int, int, int]:
    """(A : B : C) on x^3 + y^3 = n z^3 for P on y^2 = x^3 - 432 n^2.

    O maps to the point at infinity (1 : -1 : 0).
    """
    n = to_mpq(n)
    if P.is_zero():
        return (1, -1, 0)
    u, v = to_mpq(_rational(P.x)), to_mpq(_rational(P.y))
    return _primitive_triple(36 * n + v, 36 * n - v, 6 * u)


def cubic_to_weierstrass(abc, n, curve: Curve | None = None) -> Point:
    a, b, c = (to_mpq(t) for t in abc)
    n = to_mpq(n)
    Cn = curve or E(n)
    if a + b == 0:
        raise ValueError("point-at-infinity: a + b = 0 maps to O")
    return Cn(12 * n * c / (a + b), 36 * n * (a - b) / (a + b))


def _rational(v):
    if isinstance(v, QOmega):
        if not v.is_rational():
            raise ValueError("coordinate is not rational")
        return v.a
    if hasattr(v, "to_K"):
        return _rational(v.to_K())
    return to_mpq(v)


def is_torsion(P: Point, bound: int = 24) -> bool:
    """Torsion iff some multiple up to ``bound`` vanishes (exact arithmetic)."""
    Q = P
    for _ in range(bound):
        if Q.is_zero():
            return True
        Q = Q + P
    return False


def descend_eigenpoint(R: Point, p: int, k: int) -> tuple[int, Point]:
    """Move the chi_p^k-eigen point R of E_1(F) to E_N(K), N = 3p (k = 1) or 3p^2 (k = 2).

    x(R) = c cbrt(N) with c in K and y(R) in K; the image is (N c, N y(R)).
    """
    N = 3 * p if k == 1 else 3 * p * p
    EN = E(N, QOmega)
    if R.is_zero():
        return N, EN.zero()
    mono = (1, 1) if k == 1 else (1, 2)
    # cbrt(3p^2) = cbrt 3 cbrt(p)^2 exactly in F
    x, y = R.x, R.y
    if x.support() != [mono] or y.support() not in ([(0, 0)], []):
        raise ArithmeticError("eigen point does not have the expected coordinate shape")
    c = x.coeff(mono)
    Q = Point(EN, c * N, y.to_K() * N)
    if not EN.contains(Q):
        raise ArithmeticError("descended point is not on E_N")
    return N, Q


def rational_point_from_K(Q: Point, N: int) -> tuple[Point | None, str]:
    """A point of E_N(Q) built from Q in E_N(K): the trace, else the twisted anti-trace."""
    if Q.is_zero():
        return None, "zero"
    EQ = E(N)
    for k in range(3):
        U = apply_unit(k, Q)
        if U.x.is_rational() and U.y.is_rational():
            if k == 0 or not is_torsion(U):
                return EQ(U.x.a, U.y.a), "rational" if k == 0 else f"omega^{k} twist"
    bar = Point(Q.curve, Q.x.conj(), Q.y.conj())
    for label, S in (("trace", Q + bar), ("sqrt-3 anti-trace", cm_action("sqrt-3", Q - bar))):
        if S.is_zero():
            continue
        R = EQ(_rational(S.x), _rational(S.y))
        if not is_torsion(R):
            return R, label
    return None, "torsion"


def extract_cube_sum(zk: SpanPoint, p: int, k: int) -> dict:
    """Cube-sum representation of N = 3p (k = 1) or 3p^2 (k = 2) from z1 or z2."""
    # any positive multiple of z_k works; the numerator point is denominator * z_k
    R = zk.cleared(zk.denominator)
    N, Q = descend_eigenpoint(R, p, k)
    out = {"n": N, "eigen": k}
    if Q.is_zero() or is_torsion(Q):
        out.update(torsion=True, rep=None)
        return out
    P, how = rational_point_from_K(Q, N)
    if P is None:
        out.update(torsion=True, rep=None)
        return out
    A, B, C = weierstrass_to_cubic(P, N)
    rep = CubeSumRep(A, B, C, N)
    if not rep.check():
        raise ArithmeticError("cube sum failed exact substitution")
    out.update(torsion=False, rep=rep, rational_point=(str(P.x), str(P.y)), route=how, K_point=Q)
    return out


def search_cube_sum(n: int, height_bound: int = 1000) -> CubeSumRep | None:
    """Smallest coprime A^3 + B^3 = n C^3 (1 <= C, |A|, |B| <= bound) with A B != 0."""
    from .kernels import cube_sum_search

    hit = cube_sum_search(int(n), int(height_bound))
    if hit is None:
        return None
    return CubeSumRep(hit[0], hit[1], hit[2], int(n))
