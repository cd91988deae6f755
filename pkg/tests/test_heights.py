import mpmath
import pytest
from gmpy2 import mpq

from sylvester.ellcurve import E
from sylvester.heights import canonical_height, height_doubling_limit, real_period
from sylvester.tate import minimal_model


def real_period_by_quadrature(n):
    Cmin, _, _ = minimal_model(E(n))
    b2, b4, b6, _ = [mpmath.mpf(int(mpq(b))) for b in Cmin.b_invariants()]
    f = lambda x: 4 * x**3 + b2 * x**2 + 2 * b4 * x + b6
    roots = [r for r in mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=200) if abs(mpmath.im(r)) < 1e-30]
    e = max(mpmath.re(r) for r in roots)
    ncomp = 2 if len(roots) == 3 else 1
    # substitute x = e + t^2 to remove the endpoint singularity
    val = mpmath.quad(lambda t: 4 * t / mpmath.sqrt(f(e + t * t)), [0, 1, 10, mpmath.inf])
    return ncomp * mpmath.re(val)


@pytest.mark.parametrize("n", [1, 6, 12, 36])
def test_real_period_against_quadrature(n):
    with mpmath.workprec(200):
        assert abs(real_period(E(n)) - real_period_by_quadrature(n)) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("n,pt", [(6, (28, -80)), (12, (52, 280))])
def test_height_against_doubling_limit(n, pt):
    C = E(n)
    P = C(*pt)
    with mpmath.workprec(200):
        h = canonical_height(P)
        approx = height_doubling_limit(P, steps=7)
        assert abs(h - approx) / h < 2e-3


def test_height_of_torsion_is_zero():
    with mpmath.workprec(128):
        C = E(2)
        assert canonical_height(C(12, 0)) == 0
        assert canonical_height(C.zero()) == 0


def test_height_quadratic_scaling():
    C = E(6)
    P = C(28, -80)
    with mpmath.workprec(256):
        h = canonical_height(P)
        for m in (2, 3, 4, 5):
            assert abs(canonical_height(P * m) - m * m * h) < mpmath.mpf(10) ** -25


def test_E1_lattice_is_cm_stable():
    from sylvester.heights import period_lattice

    with mpmath.workprec(200):
        lat = period_lattice(E(1))
        omega = lat.w1
        assert abs(lat.w2 - omega * (mpmath.mpf(1) / 2 + mpmath.sqrt(-3) / 2)) < mpmath.mpf(10) ** -50
        # (1 + sqrt(-3))/2 maps the lattice to itself: image of w2 is w2 - w1 + ... in Z w1 + Z w2
        u = (1 + mpmath.sqrt(-3)) / 2
        for v in (lat.w1, lat.w2):
            img = u * v
            b = mpmath.im(img) / mpmath.im(lat.w2)
            a = mpmath.re(img - b * lat.w2) / lat.w1
            assert abs(a - mpmath.nint(a)) < 1e-40 and abs(b - mpmath.nint(b)) < 1e-40


def test_E9_point_height_two_algorithms():
    P = E(9)(36, 108)
    with mpmath.workprec(200):
        h = canonical_height(P)
        assert h > 0.5
        assert abs(h - height_doubling_limit(P, steps=7)) / h < 2e-3
