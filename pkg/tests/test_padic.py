import pytest
from hypothesis import given, strategies as st

from proplie.padic import (NotAUnit, NotPIntegral, PadicInt, check_context, pad_inv, pad_make, pad_val,
                           rat_to_padic, teichmuller, vp)

ints = st.integers(min_value=-10 ** 6, max_value=10 ** 6)


def test_make_reduces():
    assert pad_make(3, 4, 85).residue == 4
    assert pad_make(3, 4, -1).residue == 80
    x = pad_make(5, 2, 25)
    assert x.residue == 0 and pad_val(x) >= 2


def test_valuations():
    assert pad_val(pad_make(3, 4, 18)) == 2
    assert pad_val(pad_make(3, 4, 1)) == 0
    assert pad_val(pad_make(3, 4, 0)) >= 4


def test_inverse():
    assert pad_inv(pad_make(3, 4, 1)).residue == 1
    u = pad_inv(pad_make(3, 4, 2))
    assert 2 * u.residue % 81 == 1
    with pytest.raises(NotAUnit):
        pad_inv(pad_make(3, 4, 3))


def test_rationals():
    half = pad_inv(pad_make(3, 4, 2))
    assert rat_to_padic(1, 2, 3, 4) == half
    assert rat_to_padic(3, 6, 3, 4) == half
    with pytest.raises(NotPIntegral):
        rat_to_padic(1, 3, 3, 4)


@pytest.mark.parametrize("p,N", [(2, 3), (9, 2), (3, 0), (1, 1)])
def test_bad_context(p, N):
    with pytest.raises(ValueError):
        check_context(p, N)


def test_teichmuller_is_root_of_unity():
    for p, N in [(3, 5), (7, 4), (11, 3)]:
        for a in range(1, p):
            w = teichmuller(a, p, N)
            assert w % p == a
            assert pow(w, p - 1, p ** N) == 1


def test_json_roundtrip():
    x = pad_make(7, 3, 100)
    assert PadicInt.from_json(x.to_json()) == x


@given(ints, ints, ints)
def test_ring_axioms(a, b, c):
    x, y, z = (pad_make(3, 4, v) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


@given(ints, ints)
def test_valuation_rules(a, b):
    x, y = pad_make(5, 3, a), pad_make(5, 3, b)
    assert pad_val(x * y) == min(pad_val(x) + pad_val(y), 3)
    assert pad_val(x + y) >= min(pad_val(x), pad_val(y))


@given(ints.filter(lambda v: v % 3 != 0))
def test_inverse_is_involution(a):
    x = pad_make(3, 6, a)
    assert pad_inv(pad_inv(x)) == x


@given(ints, ints.filter(lambda v: v != 0))
def test_rational_times_denominator(a, b):
    if vp(b, 3) > vp(a, 3) and a != 0:
        with pytest.raises(NotPIntegral):
            rat_to_padic(a, b, 3, 4)
        return
    if a == 0:
        return
    q = rat_to_padic(a, b, 3, 4)
    # compare after cancelling the common p-power
    e = vp(b, 3)
    assert q * pad_make(3, 4, b // 3 ** e) == pad_make(3, 4, a // 3 ** e)
