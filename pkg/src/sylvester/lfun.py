"""L-functions of the curves E_n: coefficients by point counting, the sign of
the functional equation by fitting the theta relation, L(1) and L'(1), the
height identity for the Heegner points R1, R2 and the local constant 1/12.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import sympy
from filelock import FileLock
from gmpy2 import mpq

from .ellcurve import E
from .fields import QOmega
from .heights import canonical_height, height_over_K, real_period
from .kernels import count_points
from .tate import minimal_model

__all__ = [
    "LSeriesData",
    "GZReport",
    "default_cache_dir",
    "an_coeffs",
    "dirichlet_coeffs",
    "complete_L",
    "theta_defect",
    "gz_verify",
    "period_identity",
    "local_beta_check",
    "local_beta_terms",
]


def default_cache_dir() -> Path:
    env = os.environ.get("SYLVESTER_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "sylvester"


@dataclass
class LSeriesData:
    n: object
    conductor: int
    bound: int
    ap: dict  # prime -> a_p
    sign: int | None = None
    bad: tuple = ()

    def hasse_ok(self) -> bool:
        return all(a * a <= 4 * q for q, a in self.ap.items())


def _curve_key(n) -> str:
    n = mpq(n)
    return str(n).replace("/", "_")


def _cache_path(cache_dir, n) -> Path:
    return Path(cache_dir) / f"E{_curve_key(n)}.txt"


def _read_cache(path: Path, n, N: int):
    if not path.exists():
        return None
    lines = path.read_text().splitlines()
    if not lines:
        return None
    head = lines[0].split()
    if len(head) != 7 or head[0] != "curve" or head[1] != str(mpq(n)) or int(head[3]) != N:
        return None
    ap = {}
    for ln in lines[1:]:
        q, a = ln.split()
        ap[int(q)] = int(a)
    return int(head[6]), ap


def _write_cache(path: Path, n, N: int, B: int, ap: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = [f"curve {mpq(n)} conductor {N} bound {B}"] + [f"{q} {ap[q]}" for q in sorted(ap)]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(body) + "\n")
    tmp.replace(path)


def _count_ap(model, B: int, start: int = 2) -> dict:
    a = [int(mpq(c)) for c in model.a]
    out = {}
    for q in sympy.primerange(start, B + 1):
        out[int(q)] = int(q) + 1 - count_points(int(q), *(c % q for c in a))
    return out


def an_coeffs(n, B: int = 100, cache_dir=None, use_cache: bool = True) -> LSeriesData:
    """a_q for primes q <= B on the minimal model of E_n (q + 1 - #E(F_q), singular point
    included, which is also right at bad primes)."""
    Cmin, _, local = minimal_model(E(n))
    N = 1
    for q, d in local.items():
        N *= q**d.f
    ap = None
    path = None
    if use_cache:
        path = _cache_path(cache_dir or default_cache_dir(), n)
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            got = _read_cache(path, n, N)
            have_B, have = got if got else (1, {})
            if have_B >= B:
                ap = {q: a for q, a in have.items() if q <= B}
            else:
                have.update(_count_ap(Cmin, B, have_B + 1))
                _write_cache(path, n, N, B, have)
                ap = have
    if ap is None:
        ap = _count_ap(Cmin, B)
    return LSeriesData(n, N, B, ap, bad=tuple(sorted(local)))


def dirichlet_coeffs(data: LSeriesData, M: int) -> list[int]:
    """a_1..a_M (index 0 unused) from the prime coefficients."""
    if M > data.bound:
        raise ValueError("coefficient bound too small")
    a = [0] * (M + 1)
    a[1] = 1
    N = data.conductor
    for q in sympy.primerange(2, M + 1):
        q = int(q)
        aq = data.ap[q]
        pw = [1, aq]
        while q ** len(pw) <= M:
            if N % q == 0:
                pw.append(pw[-1] * aq)
            else:
                pw.append(aq * pw[-1] - q * pw[-2])
        # multiply in
        for m in range(M // q, 0, -1):
            if a[m] == 0 or m % q == 0:
                continue
            qk, k = q, 1
            while m * qk <= M and k < len(pw):
                a[m * qk] = a[m] * pw[k]
                qk *= q
                k += 1
    return a


def _terms_needed(N: int, bits: int, tmin: float = 1.0) -> int:
    return int(math.ceil(bits * math.log(2) * math.sqrt(N) / (2 * math.pi * tmin))) + 20


def theta_defect(a, N: int, t) -> tuple:
    """(theta(1/t), t^2 theta(t)) for theta(t) = sum a_n exp(-2 pi n t / sqrt(N))."""
    c = 2 * mpmath.pi / mpmath.sqrt(N)

    def theta(u):
        return mpmath.fsum(a[k] * mpmath.exp(-c * k * u) for k in range(1, len(a)) if a[k])

    return theta(1 / t), t * t * theta(t)


def complete_L(n, prec: int = 128 * 4, cache_dir=None, use_cache: bool = True) -> dict:
    """L(1), L'(1), the sign and the conductor of E_n at ``prec`` bits."""
    with mpmath.workprec(prec + 32):
        data0 = an_coeffs(n, 100, cache_dir, use_cache)
        N = data0.conductor
        t = mpmath.mpf(12) / 10
        M = _terms_needed(N, prec + 32, 1 / float(t))
        data = an_coeffs(n, max(100, M), cache_dir, use_cache)
        a = dirichlet_coeffs(data, M)
        lhs, rhs = theta_defect(a, N, t)
        scale = abs(lhs) + abs(rhs)
        d_plus, d_minus = abs(lhs - rhs) / scale, abs(lhs + rhs) / scale
        eps = 1 if d_plus < d_minus else -1
        defect = min(d_plus, d_minus)
        if defect > mpmath.mpf(2) ** (-prec // 2):
            raise ArithmeticError(f"sign-ambiguous: defects {d_plus}, {d_minus}")
        c = 2 * mpmath.pi / mpmath.sqrt(N)
        if eps == 1:
            L1 = 2 * mpmath.fsum(mpmath.mpf(a[k]) / k * mpmath.exp(-c * k) for k in range(1, M + 1) if a[k])
            dL1 = mpmath.mpf(0)
        else:
            L1 = mpmath.mpf(0)
            dL1 = 2 * mpmath.fsum(mpmath.mpf(a[k]) / k * mpmath.e1(c * k) for k in range(1, M + 1) if a[k])
        data.sign = eps
    return {"L1": +L1, "dL1": +dL1, "sign": eps, "conductor": N, "sign_defect": defect, "terms": M}


def period_identity(p: int, prec: int = 128 * 4) -> dict:
    """Omega_{3p} Omega_{9p^2}, Omega_{3p^2} Omega_{9p} and Omega_1^2 / p."""
    with mpmath.workprec(prec):
        om = {m: real_period(E(m)) for m in (1, 3 * p, 9 * p * p, 3 * p * p, 9 * p)}
        a = om[3 * p] * om[9 * p * p]
        b = om[3 * p * p] * om[9 * p]
        c = om[1] ** 2 / p
        return {"periods": om, "first": a, "second": b, "target": c, "max_err": max(abs(a - c), abs(b - c))}


@dataclass
class GZReport:
    p: int
    lhs1: object
    rhs1: object
    lhs2: object
    rhs2: object
    prec_bits: int
    details: dict = field(default_factory=dict)

    @property
    def diff1(self):
        return abs(self.lhs1 - self.rhs1)

    @property
    def diff2(self):
        return abs(self.lhs2 - self.rhs2)


def gz_verify(p: int, prec: int = 128 * 4, heegner=None, cache_dir=None, use_cache: bool = True,
              search_bound: int = 0) -> GZReport:
    """Both height identities for R1 (pairing 3p, 9p^2) and R2 (pairing 3p^2, 9p).

    Heights are those of the descended points of E_N(K): the isomorphism
    E_1 -> E_N over L preserves the canonical height.  With ``search_bound``
    a small point P of E_N(Q) is searched for and h(R)/h(P) recognized as a
    rational (expected: a positive integer).
    """
    from .heegner import descend_eigenpoint, heegner_set

    H = heegner or heegner_set(p, check_traces=False)
    with mpmath.workprec(prec + 32):
        om = period_identity(p, prec)["periods"]
        L = {m: complete_L(m, prec, cache_dir, use_cache) for m in (3 * p, 9 * p * p, 3 * p * p, 9 * p)}
        lhs1 = L[3 * p]["dL1"] * L[9 * p * p]["L1"] / (om[3 * p] * om[9 * p * p])
        lhs2 = L[3 * p * p]["dL1"] * L[9 * p]["L1"] / (om[3 * p * p] * om[9 * p])
        _, Q1 = descend_eigenpoint(H.R1, p, 1)
        _, Q2 = descend_eigenpoint(H.R2, p, 2)
        rhs1 = height_over_K(Q1)
        rhs2 = height_over_K(Q2)
        details = {"L": L, "Q1": Q1, "Q2": Q2}
        if search_bound:
            details["height_ratios"] = {N: _height_ratio(N, h, search_bound) for N, h in ((3 * p, rhs1), (3 * p * p, rhs2))}
    return GZReport(p, lhs1, rhs1, lhs2, rhs2, prec, details)


def _height_ratio(N: int, h, bound: int):
    from .heegner import cubic_to_weierstrass, search_cube_sum
    from .mpnum import RecognitionError, recognize_rational

    hit = search_cube_sum(N, bound)
    if hit is None:
        return None
    hP = canonical_height(cubic_to_weierstrass((hit.A, hit.B, hit.C), N))
    try:
        return recognize_rational(h / hP, 16)
    except RecognitionError:
        return None


# --------------------------------------------------------------------------
# local constant at 3

_PHI_S = {0: mpq(1), 3: mpq(-1, 2), 6: mpq(-1, 2)}


def local_beta_terms(trivial_character: bool = False):
    """Terms Phi(t) chi_3(t) over representatives t in S (1 + y sqrt(-3)) and S' (3y + sqrt(-3)), y mod 9."""
    w = QOmega(0, 1)
    chi = {0: QOmega(1), 3: w, 6: w * w}
    S = []
    for y in range(9):
        phi = _PHI_S.get(y, mpq(0))
        c = QOmega(1) if trivial_character else chi.get(y, QOmega(1))
        S.append((y, QOmega(phi) * c))
    Sprime = [(y, QOmega(0)) for y in range(9)]
    return S, Sprime


def local_beta_check(trivial_character: bool = False) -> QOmega:
    """(1/18) sum Phi(t) chi_3(t) over S and S'; equals 1/12 for the cubic character."""
    S, Sp = local_beta_terms(trivial_character)
    total = QOmega(0)
    for _, v in S + Sp:
        total = total + v
    return total / 18
