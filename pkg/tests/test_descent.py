import math

import pytest
from gmpy2 import mpq

from sylvester.descent import (
    TernaryCubic,
    descent_class,
    everywhere_locally_solvable,
    isogeny_pair,
    locally_solvable,
    phi_prime_torsor,
    phi_selmer,
    phi_torsor,
    sel3_dim,
)
from sylvester.ellcurve import E, cube_free_part


def small_points(C, bound=60):
    k = int(mpq(C.a6))
    out = []
    for x in range(-bound, bound * 4):
        v = x**3 + k
        if v >= 0 and math.isqrt(v) ** 2 == v:
            out.append(C(x, math.isqrt(v)))
    return out


@pytest.mark.parametrize("D", [6, 12, 15, 2])
def test_isogeny_composition_is_triplication(D):
    I = isogeny_pair(D)
    for P in small_points(E(D))[:3]:
        Q = I.phi(P)
        assert I.Eprime.contains(Q)
        assert I.phi_prime(Q) == P * 3
    assert I.phi_prime(I.torsion_point).is_zero()


@pytest.mark.parametrize("D", [6, 12, 15, 30])
def test_rational_points_land_in_selmer(D):
    I = isogeny_pair(D)
    sel = set(phi_selmer(D, "phi"))
    for P in small_points(I.Eprime):
        assert descent_class(P, D) in sel
    assert descent_class(I.torsion_point, D) == cube_free_part(D * D)
    P = small_points(E(D))
    if P:
        assert descent_class(I.phi(P[0]), D) == 1


def test_selmer_local_solvability_of_known_forms():
    # Selmer's curve is everywhere locally solvable
    F = TernaryCubic({(3, 0, 0): 3, (0, 3, 0): 4, (0, 0, 3): 5})
    for q in (2, 3, 5, 7):
        assert locally_solvable(F, q)
    # distinct valuations mod 3 block nontrivial zeros
    assert not locally_solvable(TernaryCubic({(3, 0, 0): 1, (0, 3, 0): 3, (0, 0, 3): 9}), 3)
    assert not locally_solvable(TernaryCubic({(3, 0, 0): 1, (0, 3, 0): 2, (0, 0, 3): 4}), 2)
    assert not locally_solvable(TernaryCubic({(3, 0, 0): 1, (0, 3, 0): 7, (0, 0, 3): 49}), 7)
    assert locally_solvable(TernaryCubic({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): -2}), 2)


def test_torsors_have_the_known_rational_points():
    D = 6
    # the torsor of a realized class has a global zero, hence is locally solvable everywhere
    I = isogeny_pair(D)
    for P in small_points(I.Eprime):
        d = descent_class(P, D)
        assert everywhere_locally_solvable(phi_torsor(d, D), D)
    assert everywhere_locally_solvable(phi_prime_torsor(0, D), D)


@pytest.mark.parametrize("p", [2, 5, 11, 23])
def test_selmer_dimensions(p):
    dims = [sel3_dim(n)["dim"] for n in (3 * p, 3 * p * p, 9 * p, 9 * p * p)]
    assert dims == [1, 1, 0, 0]


U = [[1, 1, 0], [0, 1, 0], [2, 0, 1]]


@pytest.mark.parametrize("d", [1, 2, 4, 3])
def test_local_solvability_invariant_under_unimodular_change(d):
    F = phi_torsor(d, 6)
    G = F.transform(U)
    for q in (2, 3):
        assert locally_solvable(F, q) == locally_solvable(G, q)


def test_extra_places_do_not_change_selmer():
    base = sel3_dim(15)
    more = sel3_dim(15, extra_places=(7, 11, 13))
    assert base["dim"] == more["dim"] and base["sel_phi"] == more["sel_phi"]
