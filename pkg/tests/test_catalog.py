import pytest

from proplie.catalog import build, make_heisenberg, make_semidirect, make_sl, smallest_nonsquare, standard_entries
from proplie.chgroup import GroupElement, bch_mul, grp_inv, grp_pow
from proplie.liealg import LieAlgebraSpec, is_fab, named_sigma, sigma_type


def test_sl2_constants(sl2):
    # [pE12, pE21] = p H, [pE12, pH] = -2p pE12, [pE21, pH] = 2p pE21
    assert sl2.brackets == {(0, 1): (0, 0, 3), (0, 2): (81 - 6, 0, 0), (1, 2): (0, 6, 0)}


def test_heisenberg_constants(heis):
    assert heis.brackets == {(0, 2): (0, 0, 3), (1, 2): (0, 0, 81 - 3)}


@pytest.mark.parametrize("k", [1, 2])
def test_semidirect_relation(k):
    L = make_semidirect(3, k).algebra
    x, y = GroupElement.make(L, L.unit(0)), GroupElement.make(L, L.unit(1))
    conj = bch_mul(grp_inv(x), bch_mul(y, x))
    assert conj == grp_pow(y, 1 + 3 ** k)


def test_semidirect_constant_value():
    assert make_semidirect(3).algebra.brackets == {(0, 1): (0, 33)}


def test_nonsquare():
    assert smallest_nonsquare(3) == 2
    assert smallest_nonsquare(7) == 3


def test_sl3_shape():
    L = make_sl(3, 3).algebra
    assert L.d == 8 and is_fab(L)
    assert [a.name for a in L.automorphisms] == ["sigma_A1", "sigma_A2"]
    assert sigma_type(L, named_sigma(L, "sigma_A1")).pair == (4, 4)


def test_json_round_trip(catalog):
    for entry in catalog.values():
        L = entry.algebra
        again = LieAlgebraSpec.from_json(L.to_json())
        assert again.brackets == L.brackets and again.basis == L.basis


def test_type_facts(catalog):
    for entry in catalog.values():
        L = entry.algebra
        for name, facts in entry.facts.items():
            assert list(sigma_type(L, named_sigma(L, name)).pair) == facts["type"], (entry.name, name)
            assert is_fab(L) == facts["fab"]


def test_build_errors():
    with pytest.raises(KeyError):
        build("nope")
    with pytest.raises(ValueError):
        make_semidirect(3, 0)
    with pytest.raises(ValueError):
        make_sl(3, 1)


def test_other_primes():
    for p in (5, 7):
        for e in standard_entries(p, 3):
            assert e.algebra.p == p
    assert make_heisenberg(5, 3).algebra.brackets[(0, 2)] == (0, 0, 5)
