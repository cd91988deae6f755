import math

import pytest

from sylvester.eisenstein import (
    EisInt,
    PicGroup,
    chi_eval,
    compose,
    cubic_residue_symbol,
    idele_class_at_3,
    ideal_class_of,
    kernel_subgroup,
    pic_enumerate,
)
from sylvester.fields import QOmega

W = QOmega(0, 1)


def reduced_forms_bruteforce(D):
    out = set()
    A = 1
    while 3 * A * A <= -D:
        for B in range(-A + 1, A + 1):
            if (B * B - D) % (4 * A):
                continue
            C = (B * B - D) // (4 * A)
            if C < A or (C == A and B < 0):
                continue
            if math.gcd(math.gcd(A, B), C) == 1:
                out.add((A, B, C))
        A += 1
    return out


@pytest.mark.parametrize("c,size", [(1, 1), (18, 9), (45, 18), (99, 36)])
def test_pic_sizes_match_enumeration(c, size):
    forms = pic_enumerate(c)
    assert len(forms) == size
    assert {(f.A, f.B, f.C) for f in forms} == reduced_forms_bruteforce(-3 * c * c)


def test_class_number_one():
    assert [(f.A, f.B, f.C) for f in pic_enumerate(1)] == [(1, 1, 1)]


@pytest.mark.parametrize("c", [18, 45])
def test_composition_group_law(c):
    G = PicGroup(c)
    e = G.principal if hasattr(G, "principal") else pic_enumerate(c)[0]
    for f in G:
        assert compose(f, e) == f
        assert compose(f, f.inverse()).reduce() == e
        assert len(G) % G.order(f) == 0
        for g in G:
            assert compose(f, g) in G


def test_compose_rejects_mismatched_discriminants():
    with pytest.raises(Exception):
        compose(pic_enumerate(18)[1], pic_enumerate(45)[1])


def _split_root(pi, ell):
    for r in range(ell):
        if (r * r + r + 1) % ell == 0 and (pi.a + pi.b * r) % ell == 0:
            return r
    raise AssertionError


def symbol_bruteforce(alpha, pi):
    """alpha^((N pi - 1)/3) in Z[omega]/pi, matched against 1, omega, omega^2."""
    ell = pi.norm()
    if math.isqrt(ell) ** 2 == ell:  # inert rational prime q, residue field F_q[omega]
        q = math.isqrt(ell)

        def mul(x, y):
            a, b = x
            c, d = y
            return ((a * c - b * d) % q, (a * d + b * c - b * d) % q)

        acc, base, e = (1, 0), (alpha.a % q, alpha.b % q), (ell - 1) // 3
        while e:
            if e & 1:
                acc = mul(acc, base)
            base = mul(base, base)
            e >>= 1
        roots = [(1, 0), (0, 1), (q - 1, q - 1)]
        return roots.index(acc) if acc in roots else None
    r = _split_root(pi, ell)
    v = pow((alpha.a + alpha.b * r) % ell, (ell - 1) // 3, ell)
    if v == 0:
        return None
    return [1, r, r * r % ell].index(v)


PRIMES = [EisInt(2), EisInt(5), EisInt(11), EisInt(-1, 3), EisInt(2, 3), EisInt(3, 7), EisInt(5, 6), EisInt(1, 6)]


@pytest.mark.parametrize("pi", PRIMES, ids=lambda x: f"{x.a}+{x.b}w")
def test_cubic_symbol_matches_bruteforce(pi):
    for a in range(-6, 7):
        for b in range(-6, 7):
            alpha = EisInt(a, b)
            k = symbol_bruteforce(alpha, pi)
            expected = QOmega(0) if k is None else W**k
            assert cubic_residue_symbol(alpha, pi) == expected


def test_cube_has_trivial_symbol():
    for pi in PRIMES:
        for a, b in [(2, 1), (3, -1), (1, 4)]:
            x = EisInt(a, b)
            if symbol_bruteforce(x, pi) is None:
                continue
            assert cubic_residue_symbol(x * x * x, pi) == QOmega(1)


def test_symbol_of_omega_at_inert_prime():
    for q in (2, 5, 11, 23, 29):
        assert cubic_residue_symbol(EisInt(0, 1), EisInt(q)) == W ** (((q * q - 1) // 3) % 3)


def test_symbol_rejects_prime_above_three():
    with pytest.raises(ValueError):
        cubic_residue_symbol(EisInt(2), EisInt(1, 2))


@pytest.mark.parametrize("p", [2, 5, 11, 23])
def test_class_field_anchors(p):
    c = 9 * p
    assert chi_eval(3, idele_class_at_3(EisInt(1, 3), c)) == W * W
    assert chi_eval(3, idele_class_at_3(EisInt(0, 1), c)) == QOmega(1)
    # cbrt p moved by omega exactly when p = 2 mod 9
    expected = W if p % 9 == 2 else W * W
    assert chi_eval(p, idele_class_at_3(EisInt(0, 1), c)) == expected


@pytest.mark.parametrize("p", [2, 5, 11])
def test_characters_are_multiplicative(p):
    G = PicGroup(9 * p)
    for n in (3, p, 3 * p, 3 * p * p):
        chi = G.character(n)
        for f in G:
            for g in G:
                assert chi(G.mul(f, g)) == chi(f) * chi(g)
    c3, cp, c3p = G.character(3), G.character(p), G.character(3 * p)
    for f in G:
        assert c3p(f) == c3(f) * cp(f)
    assert chi_eval(3, pic_enumerate(9 * p)[0]) == QOmega(1)


@pytest.mark.parametrize("p,size", [(2, 1), (5, 2), (11, 4)])
def test_kernel_subgroup_sizes(p, size):
    G = PicGroup(9 * p)
    assert len(kernel_subgroup([], G)) == len(G)
    assert len(kernel_subgroup([G.character(3), G.character(p)], G)) == size


def test_ideal_class_of_principal_generator():
    # a rational integer prime to c generates a principal O_c-ideal
    assert ideal_class_of(EisInt(7), 18) == pic_enumerate(18)[0]
