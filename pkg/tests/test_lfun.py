import mpmath
import pytest
import sympy
from gmpy2 import mpq

from sylvester.ellcurve import E
from sylvester.fields import QOmega
from sylvester.heights import real_period
from sylvester.lfun import (
    an_coeffs,
    complete_L,
    dirichlet_coeffs,
    local_beta_check,
    local_beta_terms,
    period_identity,
)

from conftest import ADMISSIBLE


def naive_ap(n, q):
    k = (-432 * n * n) % q
    cubes = {}
    for x in range(q):
        cubes[x] = (x**3 + k) % q
    squares = {}
    for y in range(q):
        squares[y * y % q] = squares.get(y * y % q, 0) + 1
    count = 1 + sum(squares.get(v, 0) for v in cubes.values())
    return q + 1 - count


@pytest.mark.parametrize("n", [1, 6, 12, 36])
def test_ap_against_naive_count(n):
    data = an_coeffs(n, 200, use_cache=False)
    for q in sympy.primerange(5, 200):
        if (6 * n) % q:
            assert data.ap[q] == naive_ap(n, q)
    assert data.hasse_ok()


def test_a7_of_E1():
    assert an_coeffs(1, 10, use_cache=False).ap[7] == naive_ap(1, 7) == -1


def test_supersingular_primes_vanish():
    data = an_coeffs(6, 300, use_cache=False)
    for q in sympy.primerange(5, 300):
        if q % 3 == 2:
            assert data.ap[q] == 0


def test_dirichlet_coefficients_multiplicative():
    data = an_coeffs(6, 400, use_cache=False)
    a = dirichlet_coeffs(data, 400)
    for m in range(1, 21):
        for n in range(1, 21):
            if sympy.gcd(m, n) == 1 and m * n <= 400:
                assert a[m * n] == a[m] * a[n]
    a49 = a[49]
    assert a49 == data.ap[7] ** 2 - 7


def test_coefficient_cache_round_trip(tmp_path):
    d1 = an_coeffs(15, 150, cache_dir=tmp_path)
    files = list(tmp_path.glob("E15.txt"))
    assert len(files) == 1
    head = files[0].read_text().splitlines()[0].split()
    assert head[0] == "curve" and head[1] == "15" and int(head[-1]) == 150
    d2 = an_coeffs(15, 100, cache_dir=tmp_path)
    assert all(d2.ap[q] == d1.ap[q] for q in d2.ap)
    d3 = an_coeffs(15, 300, cache_dir=tmp_path)
    assert d3.ap == an_coeffs(15, 300, use_cache=False).ap


@pytest.mark.parametrize("n,ratio", [(1, mpq(1, 3)), (2, mpq(1, 2)), (3, mpq(1))])
def test_central_value_ratio(n, ratio):
    with mpmath.workprec(160):
        r = complete_L(n, 128, use_cache=False)
        assert r["sign"] == 1
        v = r["L1"] / real_period(E(n))
        assert abs(v - mpmath.mpf(int(ratio.numerator)) / int(ratio.denominator)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("n,sign", [(6, -1), (12, -1), (36, 1), (18, 1)])
def test_signs_for_p2_pairings(n, sign):
    r = complete_L(n, 96, use_cache=False)
    assert r["sign"] == sign and r["conductor"] == 972


@pytest.mark.parametrize("p", ADMISSIBLE)
def test_period_identity(p):
    with mpmath.workprec(200):
        r = period_identity(p, 160)
        assert r["max_err"] < mpmath.mpf(10) ** -40


def test_local_beta():
    assert local_beta_check() == QOmega(mpq(1, 12))
    assert local_beta_check(trivial_character=True) == QOmega(0)
    S, Sp = local_beta_terms()
    assert sum((v for _, v in Sp), QOmega(0)) == QOmega(0)
    assert len(S) == len(Sp) == 9


def test_values_stable_under_doubled_precision():
    a = complete_L(6, 128, use_cache=False)
    b = complete_L(6, 256, use_cache=False)
    with mpmath.workprec(256):
        assert abs(a["dL1"] - b["dL1"]) < mpmath.mpf(2) ** -64


def test_gz_height_ratio_is_integral():
    from sylvester.lfun import gz_verify

    r = gz_verify(2, 256, search_bound=100)
    ratios = r.details["height_ratios"]
    assert set(ratios) == {6, 12}
    for q in ratios.values():
        assert q is not None and q.denominator == 1 and q > 0
