import random

import pytest
from hypothesis import given, strategies as st

from proplie.lattice import mat_rank_mod_p
from proplie.modrep import (CharVector, DihedralModule, GModule, InconsistentInput, RelationViolation, block_diag,
                            change_basis, char_dual, dihedral_free_rank, dihedral_lower_bound, dirichlet_dimension,
                            dirichlet_module, free_rank_bruteforce, norm_rank_t, r_min_gens, s3_indecomposables,
                            t_lower_bound)


def jordan(n):
    return tuple(tuple(1 if j in (i, i + 1) else 0 for j in range(n)) for i in range(n))


def random_invertible(rng, n, p):
    while True:
        P = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if mat_rank_mod_p(P, p) == n:
            return P


def test_r_min_gens():
    assert r_min_gens(CharVector.regular(3, 2)) == 1
    assert r_min_gens(CharVector(3, 2, (2, 0))) == 2
    assert r_min_gens(CharVector(7, 3, (3, 1, 1))) == 3


def test_dual():
    v = CharVector(7, 3, (2, 1, 0))
    assert char_dual(v).mults == (2, 0, 1)
    assert char_dual(CharVector(3, 2, (4, 1))).mults == (4, 1)


mults3 = st.lists(st.integers(0, 6), min_size=3, max_size=3)


@given(mults3)
def test_r_is_duality_invariant(m):
    v = CharVector(7, 3, tuple(m))
    assert r_min_gens(char_dual(v)) == r_min_gens(v)


@given(mults3, mults3)
def test_r_subadditive(a, b):
    A, C = CharVector(7, 3, tuple(a)), CharVector(7, 3, tuple(b))
    assert r_min_gens(A + C) <= r_min_gens(A) + r_min_gens(C)


def test_char_vector_validation():
    with pytest.raises(ValueError):
        CharVector(7, 4, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        CharVector(7, 3, (1, -1, 0))
    v = CharVector(7, 3, (1, 2, 3))
    assert CharVector.from_json(v.to_json()) == v


def test_dirichlet_examples():
    assert dirichlet_module(2, 3, [1], 0).mults == (0, 1)
    assert dirichlet_module(2, 3, [1], 2).mults == (2, 3)
    assert dirichlet_module(3, 7, [3, 3, 3, 3], 0).mults == (3, 0, 0)
    assert dirichlet_module(3, 7, [1], 0, True, 1).mults == (0, 2, 1)
    with pytest.raises(InconsistentInput):
        dirichlet_module(2, 3, [], 0)
    with pytest.raises(InconsistentInput):
        dirichlet_module(3, 7, [2], 1)


@given(st.sampled_from([(2, 3), (2, 5), (3, 7), (5, 11)]), st.lists(st.booleans(), min_size=1, max_size=5),
       st.integers(0, 4), st.booleans())
def test_dirichlet_dimension_identity(ctx, places, T, mu):
    ell, p = ctx
    D = [1 if split else ell for split in places]
    v = dirichlet_module(ell, p, D, T, mu)
    assert v.dim == dirichlet_dimension(ell, D, T, mu)


def test_norm_rank_examples():
    assert norm_rank_t(GModule(3, (jordan(3),), (3,))) == 1
    assert norm_rank_t(GModule(3, ((((1,),)),), (3,))) == 0
    M = GModule(3, (block_diag([jordan(3), jordan(3), jordan(2)]),), (3,))
    assert norm_rank_t(M) == 2 == free_rank_bruteforce(M)


def test_relations_checked():
    with pytest.raises(RelationViolation):
        GModule(3, (((1, 1), (0, 2)),), (3,))
    with pytest.raises(RelationViolation):
        DihedralModule(3, jordan(2), ((1, 0), (0, 1)))


def test_adding_a_free_summand():
    rng = random.Random(3)
    for _ in range(10):
        blocks = [jordan(rng.choice([1, 2, 3])) for _ in range(rng.randrange(1, 3))]
        M = GModule(3, (block_diag(blocks),), (3,))
        M2 = GModule(3, (block_diag(blocks + [jordan(3)]),), (3,))
        assert norm_rank_t(M2) == norm_rank_t(M) + 1


def test_abelian_noncyclic_group():
    # F_3[Z/3 x Z/3] itself: rho acts on the first tensor factor, the other generator on the second
    J = jordan(3)
    I3 = tuple(tuple(int(i == j) for j in range(3)) for i in range(3))
    kron = lambda a, b: tuple(tuple(a[i // 3][j // 3] * b[i % 3][j % 3] for j in range(9)) for i in range(9))
    M = GModule(3, (kron(J, I3), kron(I3, J)), (3, 3))
    assert norm_rank_t(M) == 1
    N = GModule(3, (kron(J, I3), kron(I3, I3)), (3, 3))
    assert norm_rank_t(N) == 0


def test_lower_bound_examples():
    assert t_lower_bound(10, 3, 2) == 6
    assert t_lower_bound(5, 6, 1) == 0


def test_s3_modules():
    ind = s3_indecomposables()
    assert sorted(len(r) for r, _ in ind.values()) == [1, 1, 2, 2, 3, 3]
    P = [ind["P+"], ind["P-"]]
    M = DihedralModule(3, block_diag([m[0] for m in P]), block_diag([m[1] for m in P]))
    assert dihedral_free_rank(M) == 1
    for name, (r, t) in ind.items():
        assert dihedral_free_rank(DihedralModule(3, r, t)) == 0


def test_s3_change_of_basis_invariance():
    rng = random.Random(9)
    ind = s3_indecomposables()
    names = ["P+", "P-", "radP+", "sign"]
    rho = block_diag([ind[n][0] for n in names])
    tau = block_diag([ind[n][1] for n in names])
    P = random_invertible(rng, len(rho), 3)
    M = DihedralModule(3, change_basis(3, rho, P), change_basis(3, tau, P))
    assert dihedral_free_rank(M) == 1
    assert dihedral_lower_bound(M) <= 1
