import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from proplie.catalog import make_sl
from proplie.chgroup import (GroupElement, NotPowerful, additive_limit, bch_mul, bracket_limit, commutator,
                             default_cutoff, degree_part, fixed_subgroup_generators, from_second_kind, grp_inv,
                             grp_pow, sigma_apply, to_second_kind)
from proplie.liealg import bracket, check_automorphism, named_sigma

SL2 = make_sl(3, 2).algebra
coords = st.lists(st.integers(0, 80), min_size=3, max_size=3)


def elt(L, v):
    return GroupElement.make(L, v)


def test_low_degree_coefficients():
    assert degree_part(2).coeffs == (Fraction(1, 2),)
    assert degree_part(3).coeffs == (Fraction(1, 12), Fraction(-1, 12))
    # [X,[Y,[X,Y]]] = [Y,[X,[X,Y]]], so only the sum of the two middle terms is canonical
    c = degree_part(4).coeffs
    assert c[0] == c[3] == 0 and c[1] + c[2] == Fraction(-1, 24)


def test_cutoff_grows_with_precision():
    assert default_cutoff(3, 4) < default_cutoff(3, 8)
    assert default_cutoff(7, 4) <= default_cutoff(3, 4)


def test_identity_and_commuting(heis):
    x, y = elt(heis, heis.unit(0)), elt(heis, heis.unit(1))
    assert bch_mul(x, GroupElement.identity(heis)) == x
    # [x, y] = 0 in this algebra, so the product is plain addition
    assert bch_mul(x, y).coords == (1, 1, 0)


def test_not_powerful_rejected():
    from proplie.liealg import LieAlgebraSpec
    L = LieAlgebraSpec.from_json({"p": 3, "precision": 3, "basis": ["a", "b", "c"],
                                  "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 1]}]})
    with pytest.raises(NotPowerful):
        bch_mul(elt(L, (1, 0, 0)), elt(L, (0, 1, 0)))


def test_backends_agree_on_sl2():
    rng = random.Random(11)
    for _ in range(30):
        x = elt(SL2, [rng.randrange(81) for _ in range(3)])
        y = elt(SL2, [rng.randrange(81) for _ in range(3)])
        assert bch_mul(x, y) == bch_mul(x, y, backend="matrix")


def test_powers(heis):
    x = elt(heis, (5, 7, 2))
    assert grp_pow(x, 0).is_identity()
    assert grp_pow(x, 3).coords == tuple(3 * c % 81 for c in x.coords)
    assert grp_pow(x, -2).coords == tuple(-2 * c % 81 for c in x.coords)


@given(coords, st.integers(-20, 20))
def test_power_is_scaling(v, a):
    x = elt(SL2, v)
    assert grp_pow(x, a).coords == tuple(a * c % 81 for c in v)


@given(coords, coords, coords)
def test_associative(a, b, c):
    x, y, z = elt(SL2, a), elt(SL2, b), elt(SL2, c)
    assert bch_mul(bch_mul(x, y), z) == bch_mul(x, bch_mul(y, z))


@given(coords)
def test_inverse(v):
    x = elt(SL2, v)
    assert bch_mul(x, grp_inv(x)).is_identity()
    assert bch_mul(grp_inv(x), x).is_identity()


@given(coords, coords)
def test_sigma_equivariant(a, b):
    s = named_sigma(SL2, "sigma_eps")
    x, y = elt(SL2, a), elt(SL2, b)
    assert sigma_apply(s, bch_mul(x, y)) == bch_mul(sigma_apply(s, x), sigma_apply(s, y))


def test_second_kind():
    assert to_second_kind(GroupElement.identity(SL2)) == (0, 0, 0)
    assert to_second_kind(elt(SL2, SL2.unit(1))) == (0, 1, 0)
    rng = random.Random(4)
    for _ in range(20):
        x = elt(SL2, [rng.randrange(81) for _ in range(3)])
        assert from_second_kind(SL2, to_second_kind(x)) == x
        a = [rng.randrange(81) for _ in range(3)]
        assert to_second_kind(from_second_kind(SL2, a)) == tuple(a)


def test_second_kind_custom_basis():
    s = named_sigma(SL2, "sigma_eps")
    from proplie.liealg import sigma_adapted_basis
    B = sigma_adapted_basis(SL2, s).vectors
    x = elt(SL2, (4, 10, 33))
    assert from_second_kind(SL2, to_second_kind(x, B), B) == x


def test_limits(heis):
    x, y = elt(heis, (1, 2, 3)), elt(heis, (4, 0, 5))
    assert additive_limit(x, y) == (5, 2, 8)
    assert additive_limit(x, GroupElement.identity(heis)) == x.coords
    ex, ey = elt(SL2, SL2.unit(0)), elt(SL2, SL2.unit(1))
    assert bracket_limit(ex, ey, backend="matrix") == bracket(SL2, ex.coords, ey.coords)
    assert bracket_limit(ex, ey) == bracket(SL2, ex.coords, ey.coords)


def test_commutator_leading_term():
    x, y = elt(SL2, SL2.unit(0)), elt(SL2, SL2.unit(2))
    c = commutator(x, y).coords
    b = bracket(SL2, x.coords, y.coords)
    assert all((u - v) % 9 == 0 for u, v in zip(c, b))


def test_fixed_generators(heis):
    assert [g.coords for g in fixed_subgroup_generators(SL2, named_sigma(SL2, "sigma_D"))] == [(0, 0, 1)]
    assert len(fixed_subgroup_generators(heis, named_sigma(heis, "sigma_A"))) == 2
    trivial = check_automorphism(SL2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1)
    assert len(fixed_subgroup_generators(SL2, trivial)) == 3


def test_fixed_points_have_fixed_exponents_only():
    s = named_sigma(SL2, "sigma_D")
    z = elt(SL2, (0, 0, 1))
    w = bch_mul(grp_pow(z, 7), grp_pow(z, 5))
    assert sigma_apply(s, w) == w
    from proplie.liealg import sigma_adapted_basis
    B = sigma_adapted_basis(SL2, s).vectors
    assert to_second_kind(w, B)[1:] == (0, 0)
