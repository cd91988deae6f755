"""Period lattices, elliptic logarithms and Neron-Tate heights over Q.

Heights use the normalization in which h_hat(P) is the limit of h(x(2^n P))/4^n
with h(x) = log max(|num|, den); this is twice the value of the local-height
convention with a factor 1/2 in front of log|x|_v.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from .ellcurve import Curve, Point
from .tate import minimal_model

__all__ = [
    "PeriodData",
    "period_lattice",
    "real_period",
    "elliptic_log",
    "canonical_height",
    "naive_height",
    "height_doubling_limit",
    "height_over_K",
]


def _mp(v):
    v = mpq(v)
    return mpmath.mpf(int(v.numerator)) / int(v.denominator)


@dataclass(frozen=True)
class PeriodData:
    omega: object  # real period of the minimal model (one real component)
    w1: object
    w2: object

    @property
    def tau(self):
        return self.w2 / self.w1


def _two_torsion_roots(C: Curve):
    b2, b4, b6, _ = (_mp(b) for b in C.b_invariants())
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)
    real = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(2) ** (-mpmath.mp.prec // 2)]
    if len(real) != 1:
        raise ValueError("only curves with negative discriminant are supported")
    e1 = mpmath.re(real[0])
    others = [r for r in roots if r is not real[0]]
    e2 = [r for r in others if mpmath.im(r) > 0][0]
    e3 = mpmath.conj(e2)
    return e1, e2, e3


def period_lattice(C: Curve, minimal: bool = True) -> PeriodData:
    """Lattice of the Neron differential (minimal model unless minimal=False)."""
    if minimal:
        C = minimal_model(C)[0]
    if C.discriminant() >= 0:
        raise ValueError("only curves with negative discriminant are supported")
    e1, e2, e3 = _two_torsion_roots(C)
    w1 = 2 * mpmath.re(mpmath.elliprf(0, e1 - e2, e1 - e3))
    wy = 2 * mpmath.re(mpmath.elliprf(0, e2 - e1, e3 - e1))
    w2 = (w1 + 1j * wy) / 2
    return PeriodData(w1, w1, mpmath.mpc(w2))


def real_period(C) -> mpmath.mpf:
    if not isinstance(C, Curve):
        from .ellcurve import E

        C = E(C)
    return period_lattice(C).omega


def elliptic_log(C: Curve, P: Point):
    """z in [0, w1/2] with x(P) = x(z) for a real point, up to sign."""
    x = _mp(P.x)
    e1, e2, e3 = _two_torsion_roots(C)
    if x < e1:
        raise ValueError("real point with x below the real root")
    return mpmath.re(mpmath.elliprf(x - e1, x - e2, x - e3))


def _lambda_inf(C: Curve, P: Point, lat: PeriodData):
    """Archimedean local height by the q-expansion of the Neron function."""
    z = elliptic_log(C, P)
    tau = lat.tau
    q = mpmath.expj(2 * mpmath.pi * tau)
    u = mpmath.expj(2 * mpmath.pi * z / lat.w1)
    t = mpmath.im(z) / mpmath.im(tau)
    B2 = t * t - t + mpmath.mpf(1) / 6
    lam = -B2 * mpmath.log(abs(q)) / 2 - mpmath.log(abs(1 - u))
    qn = mpmath.mpf(1)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec - 10)
    while True:
        qn = qn * q
        if abs(qn) < eps:
            break
        lam -= mpmath.log(abs((1 - qn * u) * (1 - qn / u)))
    return lam


def _good_multiple(C: Curve, P: Point, local) -> tuple[Point, int]:
    """m*P lying on the identity component at every bad prime, with m | 12."""
    for m in (1, 2, 3, 4, 6, 12):
        Q = P * m
        if Q.is_zero():
            return Q, m
        if all(_in_identity_component(C, Q, p) for p in local):
            return Q, m
    raise AssertionError("no multiple reduces to the identity component")


def _in_identity_component(C: Curve, P: Point, p: int) -> bool:
    x, y = mpq(P.x), mpq(P.y)
    if _vq(x, p) < 0:
        return True
    a1, a2, a3, a4, _ = (mpq(a) for a in C.a)
    # nonsingular reduction iff one of the partial derivatives is a unit
    fx = 3 * x * x + 2 * a2 * x + a4 - a1 * y
    fy = 2 * y + a1 * x + a3
    return _vq(fx, p) == 0 or _vq(fy, p) == 0


def _vq(v, p: int) -> int:
    v = mpq(v)
    if v == 0:
        return 10**9
    num, den = int(v.numerator), int(v.denominator)
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


def canonical_height(P: Point, C_min: Curve | None = None) -> mpmath.mpf:
    """Neron-Tate height of a rational point on a curve over Q."""
    if P.is_zero():
        return mpmath.mpf(0)
    C = P.curve
    Cmin, tr, local = minimal_model(C)
    Q = tr.apply_point(P, Cmin)
    Qm, m = _good_multiple(Cmin, Q, local)
    if Qm.is_zero():
        return mpmath.mpf(0)
    lat = period_lattice(Cmin, minimal=False)
    lam = _lambda_inf(Cmin, Qm, lat)
    den = int(mpq(Qm.x).denominator)
    D = abs(int(Cmin.discriminant()))
    h_half = lam + mpmath.log(den) / 2 + mpmath.log(D) / 12
    return 2 * h_half / (m * m)


def naive_height(x) -> mpmath.mpf:
    x = mpq(x)
    return mpmath.log(max(abs(int(x.numerator)), int(x.denominator), 1))


def height_doubling_limit(P: Point, steps: int = 8) -> mpmath.mpf:
    """h(x(2^n P)) / 4^n for n = steps; an independent, slowly converging oracle."""
    Q = P
    for _ in range(steps):
        Q = Q + Q
        if Q.is_zero():
            return mpmath.mpf(0)
    return naive_height(Q.x) / mpmath.mpf(4) ** steps


def height_over_K(P: Point) -> mpmath.mpf:
    """Height of a point on E_n over K = Q(omega) via its trace and anti-trace.

    4 h(P) = h(P + Pbar) + h([sqrt(-3)](P - Pbar)) / 3, both terms rational points.
    """
    from .ellcurve import cm_action, mordell
    from .fields import QOmega

    if P.is_zero():
        return mpmath.mpf(0)
    bar = Point(P.curve, P.x.conj(), P.y.conj())
    S = P + bar
    A = cm_action("sqrt-3", P - bar)
    k = P.curve.a6
    k = k.a if isinstance(k, QOmega) else mpq(k)
    Cq = mordell(k)
    total = mpmath.mpf(0)
    for R, wgt in ((S, 1), (A, mpmath.mpf(1) / 3)):
        if R.is_zero():
            continue
        if not (R.x.is_rational() and R.y.is_rational()):
            raise AssertionError("trace is not rational")
        total += wgt * canonical_height(Point(Cq, R.x.a, R.y.a))
    return total / 4
