from fractions import Fraction

import mpmath
import pytest

from sylvester.fields import QOmega
from sylvester.mpnum import (
    ComplexBall,
    RecognitionError,
    UpperHalfPoint,
    dedekind_sum,
    eta,
    eta_anywhere,
    eta_multiplier,
    recognize,
    recognize_qomega,
    recognize_rational,
    reduce_to_fundamental,
)


def eta_series(t, terms=400):
    # pentagonal-number expansion: q^(1/24) sum (-1)^k q^(k(3k-1)/2)
    q = mpmath.expj(2 * mpmath.pi * t)
    s = mpmath.mpc(0)
    for k in range(-terms, terms + 1):
        s += (-1) ** k * q ** (k * (3 * k - 1) // 2)
    return mpmath.expj(2 * mpmath.pi * t / 24) * s


def saw(x):
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_sum_direct(h, k):
    return sum(saw(Fraction(r, k)) * saw(Fraction(h * r, k)) for r in range(1, k))


@pytest.mark.parametrize("t", [mpmath.mpc(0.1, 1.1), mpmath.mpc(-0.3, 0.9), mpmath.mpc(0.45, 2.0)])
def test_eta_against_pentagonal_series(t):
    with mpmath.workprec(200):
        b = eta(t, 160)
        ref = eta_series(t, 60)
        assert abs(b.mid - ref) < mpmath.mpf(2) ** -150


def test_eta_translation():
    with mpmath.workprec(300):
        t = mpmath.mpc("0.2", "0.8")
        r = eta(t + 1, 256).mid / eta(t, 256).mid
        assert abs(r - mpmath.expjpi(mpmath.mpf(1) / 12)) < mpmath.mpf(2) ** -240


def test_eta_inversion():
    with mpmath.workprec(300):
        t = mpmath.mpc("0.1", "1.3")
        r = eta_anywhere(-1 / t, 256).mid / eta(t, 256).mid
        assert abs(r - mpmath.sqrt(t / 1j)) < mpmath.mpf(2) ** -230


def test_eta_modulus_law():
    with mpmath.workprec(300):
        t = mpmath.mpc("0.13", "0.7")
        g = ((2, 1), (7, 4))
        gt = (2 * t + 1) / (7 * t + 4)
        lhs = abs(eta_anywhere(gt, 256).mid)
        rhs = abs(7 * t + 4) ** 0.5 * abs(eta(t, 256).mid)
        assert abs(lhs / rhs - 1) < mpmath.mpf(2) ** -220
        m = eta_multiplier(g, t)
        assert abs(eta_anywhere(gt, 256).mid - m * eta(t, 256).mid) < mpmath.mpf(2) ** -220


@pytest.mark.parametrize("h,k", [(1, 5), (3, 7), (5, 12), (11, 27), (17, 81), (-4, 9), (100, 243)])
def test_dedekind_sum_matches_direct_sum(h, k):
    assert dedekind_sum(h, k) == dedekind_sum_direct(h, k)


def test_reduce_translation_and_inversion():
    t, g = reduce_to_fundamental(mpmath.mpc(5, 1))
    assert abs(t - 1j) < 1e-12 and g == ((1, -5), (0, 1))
    t, _ = reduce_to_fundamental(mpmath.mpc(0, 0.01))
    assert t.imag >= mpmath.sqrt(3) / 2 - 1e-12


def test_reduce_exact_point():
    tau = UpperHalfPoint(QOmega(0, 5) / 9)
    t, g = reduce_to_fundamental(tau)
    assert 2 * abs(t.real()) <= 1 and t.abs2() >= 1
    assert t == tau.apply(g)


def test_recognize_sqrt2():
    with mpmath.workprec(200):
        r = recognize(ComplexBall(mpmath.sqrt(2), mpmath.mpf(2) ** -190), 4, 16)
        assert r.certified and r.minimal_polynomial == [-2, 0, 1]


def test_recognize_f_at_omega_over_nine_factor_of_27x6_plus_1():
    with mpmath.workprec(300):
        z = mpmath.expjpi(-mpmath.mpf(1) / 6) / mpmath.sqrt(3)
        r = recognize(ComplexBall(z, mpmath.mpf(2) ** -280), 6, 16)
        import sympy

        x = sympy.symbols("x")
        mp = sympy.Poly(list(reversed(r.minimal_polynomial)), x)
        assert sympy.rem(sympy.Poly(27 * x**6 + 1, x), mp).is_zero


def test_recognize_rejects_perturbed_value():
    with mpmath.workprec(200):
        with pytest.raises(RecognitionError):
            recognize(ComplexBall(mpmath.sqrt(2) + mpmath.mpf(10) ** -3, mpmath.mpf(2) ** -190), 2, 8)


def test_recognize_rational_and_qomega():
    with mpmath.workprec(256):
        assert recognize_rational(mpmath.mpf(355) / 113) == Fraction(355, 113)
        target = QOmega(Fraction(-13, 3), Fraction(7, 5))
        assert recognize_qomega(target.to_complex()) == target


def test_ball_arithmetic_contains():
    with mpmath.workprec(128):
        a = ComplexBall(mpmath.mpf(1) / 3, mpmath.mpf(2) ** -100)
        b = a * a + a
        assert b.contains(mpmath.mpf(4) / 9)
        assert not b.contains(mpmath.mpf(4) / 9 + mpmath.mpf(2) ** -60)
