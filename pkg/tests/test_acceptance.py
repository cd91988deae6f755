"""Acceptance criteria 1-9, one test per criterion at the stated tolerances.

A PASS/FAIL line per criterion is printed in the terminal summary (and by
``python tests/test_acceptance.py``).
"""
import time

import mpmath
import sympy
from gmpy2 import mpq

from sylvester.ellcurve import Curve, Point, triplication_fiber
from sylvester.fields import Fp2, QOmega
from sylvester.heegner import extract_cube_sum, heegner_set, nontriviality_mod_p
from sylvester.lfun import gz_verify, local_beta_check, period_identity
from sylvester.descent import sel3_dim
from sylvester.modcurve import cusp_coords, kronecker_check

ADMISSIBLE_29 = [p for p in sympy.primerange(2, 30) if p % 9 in (2, 5)]
ADMISSIBLE_23 = [p for p in ADMISSIBLE_29 if p <= 23]
DIGITS_128 = int(128 * 3.3219280948873626) + 1

RESULTS = {}


def record(n, ok, detail=""):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


def test_criterion_1_cube_sums():
    lines, ok = [], True
    for p in (2, 5):
        t0 = time.perf_counter()
        H = heegner_set(p, prec=512)
        reps = []
        for k, zk in ((1, H.z1), (2, H.z2)):
            out = extract_cube_sum(zk, p, k)
            if not out["torsion"]:
                r = out["rep"]
                if r.A**3 + r.B**3 == r.n * r.C**3 and r.n in (3 * p, 3 * p * p):
                    reps.append(r)
        dt = time.perf_counter() - t0
        ok = ok and bool(reps) and dt < 300
        lines.append(f"p={p}: {[(r.A, r.B, r.C, r.n) for r in reps]} in {dt:.1f}s")
    record(1, ok, "; ".join(lines))


def test_criterion_2_kronecker():
    bad, times = [], []
    for p in (2, 5, 11):
        for target in "fgxy":
            t0 = time.perf_counter()
            r = kronecker_check(p, target)
            dt = time.perf_counter() - t0
            times.append(dt)
            stated = (p, target) in ((5, "x"), (2, "y"))
            good = r["pass"] and dt < 120
            if stated:
                good = good and any(pr["congruent"] and pr.get("matches_stated_residue") for pr in r["primes"])
            if not good:
                bad.append((p, target))
    record(2, not bad, f"failures {bad}, slowest {max(times):.1f}s")


def test_criterion_3_gross_zagier():
    tol = mpmath.mpf(10) ** -8
    lines, ok = [], True
    for p in (2, 5):
        t0 = time.perf_counter()
        with mpmath.workprec(DIGITS_128 + 32):
            rep = gz_verify(p, prec=DIGITS_128)
            d1, d2 = rep.diff1, rep.diff2
        dt = time.perf_counter() - t0
        ok = ok and d1 < tol and d2 < tol and dt < 900
        lines.append(f"p={p}: |d1|={mpmath.nstr(d1, 3)} |d2|={mpmath.nstr(d2, 3)} in {dt:.1f}s")
    record(3, ok, "; ".join(lines))


def test_criterion_4_period_identity():
    worst = mpmath.mpf(0)
    with mpmath.workprec(160):
        for p in ADMISSIBLE_29:
            worst = max(worst, period_identity(p, 128)["max_err"])
        ok = worst < mpmath.mpf(10) ** -20
    record(4, ok, f"max error {mpmath.nstr(worst, 3)} over p in {ADMISSIBLE_29}")


def test_criterion_5_selmer():
    bad = {}
    for p in ADMISSIBLE_23:
        t0 = time.perf_counter()
        dims = tuple(sel3_dim(n)["dim"] for n in (3 * p, 3 * p * p, 9 * p, 9 * p * p))
        if dims != (1, 1, 0, 0) or time.perf_counter() - t0 > 60:
            bad[p] = dims
    record(5, not bad, f"mismatches {bad}")


def test_criterion_6_local_constant():
    v = local_beta_check()
    record(6, v == QOmega(mpq(1, 12)), f"value {v}")


def test_criterion_7_mod_p_nontriviality():
    bad = []
    for p in ADMISSIBLE_23:
        H = heegner_set(p, check_traces=False)
        r = nontriviality_mod_p(H.z, p)
        if not (r["order3"] and r["primitive"]):
            bad.append(p)
    record(7, not bad, f"failures {bad}")


def test_criterion_8_structural():
    expected = [1, -(2**2) * 3**4, 0, 2**9 * 3**8, 2**9 * 3**11, 0, 2**12 * 3**15, -(2**14) * 3**18, 0, -(2**18) * 3**21]
    poly_ok = triplication_fiber(-432 * 81, 36).all_coeffs() == expected
    w, s3 = QOmega(0, 1), QOmega(1, 2)
    table = {
        "0": (QOmega(12), QOmega(36)),
        "1/3": (12 * w, QOmega(36)),
        "-1/3": (12 * w * w, QOmega(36)),
        "1/9": (QOmega(0), -12 * s3),
        "-1/9": (QOmega(0), 12 * s3),
    }
    cusp_ok = cusp_coords("inf").is_zero() and all(
        cusp_coords(k).x == v[0] and cusp_coords(k).y == v[1] for k, v in table.items()
    )
    red_bad = []
    for p in ADMISSIBLE_29:
        F = lambda v: Fp2(p, v, 0)
        C = Curve(F(0), F(0), F(0), F(0), F(-432 * 81))
        if (Point(C, F(36), F(108)) * ((p + 1) // 3)).is_zero():
            red_bad.append(p)
    record(8, poly_ok and cusp_ok and not red_bad, f"poly {poly_ok}, cusps {cusp_ok}, reduction failures {red_bad}")


def test_criterion_9_property_suites():
    # the hypothesis suites live in test_properties.py; run them here so the verdict is self-contained
    import pytest as _pytest
    import pathlib

    here = pathlib.Path(__file__).parent
    code = _pytest.main(["-q", "-p", "no:cacheprovider", str(here / "test_properties.py")])
    record(9, code == 0, f"pytest exit code {code}")


def summary_lines():
    out = []
    for n in range(1, 10):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            out.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            out.append(f"criterion {n}: FAIL  (not run)")
    return out


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(RESULTS.get(n, (False,))[0] for n in range(1, 10)) else 1)
