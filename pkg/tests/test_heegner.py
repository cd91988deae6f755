import pytest
from sylvester.ellcurve import E, Curve, Point
from sylvester.fields import Fp2
from sylvester.heegner import (
    CubeSumRep,
    check_prime,
    cubic_to_weierstrass,
    eigen_projector,
    extract_cube_sum,
    heegner_set,
    is_torsion,
    nontriviality_mod_p,
    precision_schedule,
    search_cube_sum,
    weierstrass_to_cubic,
)

from conftest import ADMISSIBLE


@pytest.fixture(scope="module", params=[2, 5])
def H(request):
    return heegner_set(request.param)


@pytest.mark.parametrize("p", [3, 7, 13, 19, 4, 1])
def test_rejects_inadmissible(p):
    with pytest.raises(ValueError):
        check_prime(p)


def test_precision_schedule_doubles():
    s = list(precision_schedule(5, cap=4096))
    assert s[0] == 384 and all(b == 2 * a for a, b in zip(s, s[1:])) and s[-1] <= 4096


def test_points_are_exact_and_on_curve(H):
    for P in (H.z, H.R1, H.R2):
        assert not P.is_zero()
        assert P.curve.contains(P)


def test_eigen_point_shapes(H):
    # R1 = c cbrt(3p) with y in K; R2 = c cbrt(3p^2) with y in K
    assert H.R1.x.support() == [(1, 1)] and H.R1.y.in_K()
    assert H.R2.x.support() == [(1, 2)] and H.R2.y.in_K()


def test_decomposition(H):
    assert H.alpha0.is_zero()
    assert (H.discrepancy * 3).is_zero()
    assert (H.R1 + H.R2 + H.alpha0 - H.z * 3).is_zero()


def test_projector_idempotent(H):
    for k in (1, 2):
        S = eigen_projector(H.z, k)
        assert eigen_projector(S, k) == S * 3
        assert eigen_projector(S, (k + 1) % 3).is_zero()


@pytest.mark.parametrize("p", [2, 5, 11])
def test_mod_p_nontriviality(p):
    H = heegner_set(p, check_traces=False)
    r = nontriviality_mod_p(H.z, p)
    assert r["order3"] and r["primitive"]


@pytest.mark.parametrize("p", ADMISSIBLE)
def test_E9_supersingular_count_and_torsion_image(p):
    F = lambda v: Fp2(p, v, 0)
    C = Curve(F(0), F(0), F(0), F(0), F(-432 * 81))
    count = 1 + sum(1 for x in range(p) for y in range(p) if (y * y - x**3 + 432 * 81) % p == 0)
    assert count == p + 1
    P = Point(C, F(36), F(108))
    assert C.contains(P)
    assert not (P * ((p + 1) // 3)).is_zero()


def test_cubic_round_trip_cusp():
    P = cubic_to_weierstrass((1, 0, 1), 1)
    assert (P.x, P.y) == (12, 36)
    assert weierstrass_to_cubic(P, 1) == (1, 0, 1)


def test_cubic_round_trip_six():
    P = cubic_to_weierstrass((17, 37, 21), 6)
    assert (P.x, P.y) == (28, -80)
    A, B, C = weierstrass_to_cubic(P, 6)
    assert A**3 + B**3 == 6 * C**3 and {abs(A), abs(B)} == {17, 37} and C == 21


def test_twice_cube_gives_two_torsion():
    P = cubic_to_weierstrass((1, 1, 1), 2)
    assert P.y == 0 and (P * 2).is_zero()


def test_search_cube_sum():
    assert search_cube_sum(1, 60) is None
    r = search_cube_sum(2, 10)
    assert (r.A, r.B, r.C) == (1, 1, 1)
    r = search_cube_sum(6, 60)
    assert r.check() and r.C == 21 and {r.A, r.B} == {17, 37}


@pytest.mark.parametrize("p", [2, 5, 11])
def test_extraction_yields_a_verified_cube_sum(p):
    H = heegner_set(p, check_traces=False)
    got = []
    for k, zk in ((1, H.z1), (2, H.z2)):
        out = extract_cube_sum(zk, p, k)
        assert out["n"] == (3 * p if k == 1 else 3 * p * p)
        if not out["torsion"]:
            rep = out["rep"]
            assert rep.A**3 + rep.B**3 == rep.n * rep.C**3
            assert rep.a**3 + rep.b**3 == rep.n
            got.append(rep)
    assert got


def test_cube_sum_rep_check_rejects_trivial():
    assert not CubeSumRep(1, 0, 1, 1).check()
    assert not CubeSumRep(1, 1, 1, 3).check()


def test_is_torsion():
    C = E(1)
    assert is_torsion(C(12, 36))
    assert not is_torsion(E(6)(28, -80))


def test_tau_acts_on_eigen_points_by_units(H):
    from sylvester.ellcurve import apply_unit
    from sylvester.heegner import _galois_point

    for k, R in ((1, H.R1), (2, H.R2)):
        assert _galois_point(R, (0, 1)) == apply_unit(k, R)
