import mpmath
import pytest
import sympy
from gmpy2 import mpq

from sylvester.ellcurve import (
    E,
    Point,
    cm_action,
    cube_free_part,
    scale_iso,
    torsion3,
    triplication_fiber,
)
from sylvester.fields import KummerField, QOmega
from sylvester.modcurve import cusp_coords
from sylvester.tate import conductor, minimal_model

W = QOmega(0, 1)
S3 = QOmega(1, 2)


def test_group_identities():
    C = E(1)
    P = C(12, 36)
    Q = C(12, -36)
    assert P + C.zero() == P
    assert (P + Q).is_zero()
    assert (P * 3).is_zero()
    C9 = E(9)
    A = C9(36, 108)
    assert (A + C9(36, -108)).is_zero()


def test_omega_action_on_cusp():
    C = E(1, QOmega)
    P = Point(C, QOmega(12), QOmega(36))
    Q = cm_action("omega", P)
    assert Q == Point(C, 12 * W, QOmega(36)) and C.contains(Q)


def test_sqrt_m3_kills_kernel_point():
    C = E(1, QOmega)
    T = Point(C, QOmega(0), 12 * S3)
    assert C.contains(T)
    assert cm_action("sqrt-3", T).is_zero()


def test_torsion_nine_points_on_E1():
    pts = torsion3(1)
    assert len(pts) == 9 and len(set(map(str, pts))) == 9
    for P in pts:
        assert (P * 3).is_zero()
    labels = ["inf", "0", "1/3", "-1/3", "1/9", "-1/9"]
    listed = {str(cusp_coords(lab)) for lab in labels}
    assert listed <= set(map(str, pts))


def test_torsion_of_E9():
    pts = torsion3(9)
    F = pts[1].x.field
    r = F.gen(0)
    assert len(pts) == 9
    ys = {str(P.y) for P in pts if not P.is_zero() and P.x.is_zero()}
    # y0^2 = -2^4 3^7, i.e. y0 = +-108 sqrt(-3)
    assert ys == {str(F(108 * S3)), str(F(-108 * S3))}
    xs = {str(P.x) for P in pts if not P.is_zero() and not P.x.is_zero()}
    assert xs == {str(r * F(36 * W**i)) for i in range(3)}
    assert {str(P.y) for P in pts if not P.is_zero() and not P.x.is_zero()} == {str(F(324)), str(F(-324))}
    for P in pts:
        assert (P * 3).is_zero()


def test_triplication_fiber_of_36_108():
    x = sympy.symbols("x")
    got = triplication_fiber(-432 * 81, 36)
    expected = sympy.Poly(
        x**9 - 2**2 * 3**4 * x**8 + 2**9 * 3**8 * x**6 + 2**9 * 3**11 * x**5
        + 2**12 * 3**15 * x**3 - 2**14 * 3**18 * x**2 - 2**18 * 3**21,
        x,
    )
    assert got.all_coeffs() == expected.all_coeffs()


def test_triplication_fiber_roots_triple_correctly():
    # the rational root hits (36, 108) after tripling, the numeric roots land on x = 36
    f = triplication_fiber(-432 * 81, 36)
    C = E(9)
    with mpmath.workprec(200):
        Cc = C.__class__(*[mpmath.mpc(int(a)) for a in C.a])
        for r in sympy.Poly(f).nroots(n=60):
            xr = mpmath.mpc(str(sympy.re(r)), str(sympy.im(r)))
            yr = mpmath.sqrt(xr**3 - 432 * 81)
            P3 = Point(Cc, xr, yr) * 3
            assert abs(P3.x - 36) < 1e-30


@pytest.mark.parametrize("n,expected", [(1, 1), (6, 6), (16, 2), (-54, -2), (72, 9), (3 * 25, 75)])
def test_cube_free_part(n, expected):
    assert cube_free_part(n) == expected


def test_scale_iso_E1_to_E3():
    F = KummerField([3])
    r = F.gen(0)
    n, Et, phi = scale_iso(1, r, field=F)
    assert n == 3
    P = Point(E(1, F), F(12), F(36))
    Q = phi(P)
    assert Et.contains(Q) and Q.x == r * r * F(12) and Q.y == F(108)


def test_scale_iso_E1_to_E9_carries_torsion():
    F = KummerField([3])
    r = F.gen(0)
    n, Et, phi = scale_iso(1, r * r, field=F)
    assert n == 9
    P = Point(E(1, F), F(12), F(36))
    assert str(phi(P)) in {str(T) for T in torsion3(9)}


def naive_conductor_check(n):
    # the theta relation of the L-series holds only at the true conductor
    from sylvester.lfun import an_coeffs, dirichlet_coeffs, theta_defect

    N = conductor(E(n))
    with mpmath.workprec(120):
        data = an_coeffs(n, 1500, use_cache=False)
        a = dirichlet_coeffs(data, 1500)
        lhs, rhs = theta_defect(a, N, mpmath.mpf("1.2"))
        return N, min(abs(lhs - rhs), abs(lhs + rhs)) / abs(lhs)


def test_conductor_of_E1():
    assert conductor(E(1)) == 27


@pytest.mark.parametrize("n", [6, 12, 15])
def test_conductor_passes_functional_equation(n):
    N, defect = naive_conductor_check(n)
    assert defect < 1e-25
    assert N % 27 == 0


def test_minimal_model_of_E1():
    Cmin, tr, local = minimal_model(E(1))
    assert [int(mpq(a)) for a in Cmin.a] == [0, 0, 1, 0, -7]
    assert set(local) == {3}


def test_minimal_model_preserves_points():
    C = E(6)
    P = C(28, -80)
    Cmin, tr, _ = minimal_model(C)
    assert Cmin.contains(tr.apply_point(P, Cmin))
