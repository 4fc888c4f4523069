import random

import pytest
from hypothesis import given, strategies as st

from proplie.padic import PrecisionMismatch
from proplie.pmatrix import (OutsideConvergenceDomain, PadicMatrix, mat_add, mat_exp, mat_inv, mat_log, mat_mul,
                             mat_pow)


def rand_matrix(rng, p, N, n, scale=1):
    return PadicMatrix.make(p, N, [[scale * rng.randrange(p ** N) for _ in range(n)] for _ in range(n)])


entries = st.integers(min_value=0, max_value=80)
mat2 = st.lists(st.lists(entries, min_size=2, max_size=2), min_size=2, max_size=2)


@given(mat2, mat2, mat2)
def test_distributive(a, b, c):
    A, B, C = (PadicMatrix.make(3, 4, m) for m in (a, b, c))
    assert mat_mul(mat_add(A, B), C) == mat_add(mat_mul(A, C), mat_mul(B, C))


def test_identity_and_zero():
    A = rand_matrix(random.Random(1), 3, 4, 3)
    assert PadicMatrix.identity(3, 4, 3) @ A == A
    assert A @ PadicMatrix.zero(3, 4, 3) == PadicMatrix.zero(3, 4, 3)


def test_context_mismatch():
    with pytest.raises(PrecisionMismatch):
        mat_mul(PadicMatrix.identity(3, 4, 2), PadicMatrix.identity(3, 5, 2))
    with pytest.raises(ValueError):
        mat_add(PadicMatrix.identity(3, 4, 2), PadicMatrix.identity(3, 4, 3))


def test_exp_examples():
    assert mat_exp(PadicMatrix.make(3, 4, [[0, 3], [0, 0]])) == PadicMatrix.make(3, 4, [[1, 3], [0, 1]])
    assert mat_exp(PadicMatrix.zero(3, 4, 2)) == PadicMatrix.identity(3, 4, 2)
    E = mat_exp(PadicMatrix.make(3, 4, [[3, 0], [0, -3]])).reduce(2)
    assert E == PadicMatrix.make(3, 2, [[4, 0], [0, -2]])


def test_exp_needs_positive_valuation():
    with pytest.raises(OutsideConvergenceDomain):
        mat_exp(PadicMatrix.make(3, 4, [[1, 0], [0, 0]]))


def test_log_examples():
    assert mat_log(PadicMatrix.identity(3, 4, 2)) == PadicMatrix.zero(3, 4, 2)
    assert mat_log(PadicMatrix.make(3, 4, [[1, 3], [0, 1]])) == PadicMatrix.make(3, 4, [[0, 3], [0, 0]])
    with pytest.raises(OutsideConvergenceDomain):
        mat_log(PadicMatrix.make(3, 4, [[2, 0], [0, 1]]))


def test_log_exp_roundtrip():
    rng = random.Random(7)
    for _ in range(50):
        M = rand_matrix(rng, 3, 5, 2, scale=3)
        assert mat_log(mat_exp(M)) == M
        assert mat_exp(mat_log(mat_exp(M))) == mat_exp(M)


def test_conjugation_equivariance():
    rng = random.Random(3)
    g = PadicMatrix.make(5, 4, [[1, 2], [3, 2]])
    gi = mat_inv(g)
    assert g @ gi == PadicMatrix.identity(5, 4, 2)
    for _ in range(10):
        M = rand_matrix(rng, 5, 4, 2, scale=5)
        assert mat_exp(g @ M @ gi) == g @ mat_exp(M) @ gi


def test_power_matches_repeated_product():
    A = rand_matrix(random.Random(5), 7, 3, 3)
    P = PadicMatrix.identity(7, 3, 3)
    for _ in range(6):
        P = P @ A
    assert mat_pow(A, 6) == P
