"""Worked example families: matrix realizations, structure constants and automorphisms.

Structure constants and automorphism matrices are derived from the matrices themselves
(commutators and conjugations, solved back into coordinates), never typed in by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .lattice import elementary_divisors, solve
from .liealg import Automorphism, LieAlgebraSpec, Realization, check_automorphism
from .padic import check_context
from .pmatrix import PadicMatrix, mat_inv, mat_log

IntMatrix = Tuple[Tuple[int, ...], ...]

DEFAULT_PRECISION = 4


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Dict[str, int]
    algebra: LieAlgebraSpec = field(repr=False)
    facts: Dict[str, dict]  # automorphism name -> expected facts


def _mm(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def _flat(m) -> List[int]:
    return [v for r in m for v in r]


def _shift(images: Sequence[IntMatrix], p: int, N: int) -> int:
    A = [list(col) for col in zip(*[_flat(m) for m in images])]
    vals = elementary_divisors(A, p, N + 64)
    if len(vals) < len(images):
        raise ValueError("matrix images are linearly dependent")
    return max(vals)


def _coords(images: Sequence[IntMatrix], target, p: int, M: int) -> List[int]:
    A = [list(col) for col in zip(*[_flat(m) for m in images])]
    c, _ = solve(A, _flat(target), p, M)
    return c


def _structure_constants(images: Sequence[IntMatrix], p: int, N: int) -> Dict[Tuple[int, int], Tuple[int, ...]]:
    M = N + _shift(images, p, N)
    mod = p ** N
    out = {}
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            A, B = images[i], images[j]
            comm = [[x - y for x, y in zip(r, s)] for r, s in zip(_mm(A, B), _mm(B, A))]
            out[(i, j)] = tuple(c % mod for c in _coords(images, comm, p, M))
    return out


def _conjugation(images: Sequence[IntMatrix], g: Sequence[Sequence[int]], p: int, N: int) -> IntMatrix:
    """Matrix (acting on coordinate columns) of X -> g X g^-1."""
    M = N + _shift(images, p, N)
    G = PadicMatrix.make(p, M, g)
    Gi = mat_inv(G)
    mod = p ** N
    cols = []
    for img in images:
        conj = _mm(_mm(G.rows, img), Gi.rows)
        cols.append([c % mod for c in _coords(images, conj, p, M)])
    d = len(images)
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _unit_matrix(n: int, i: int, j: int, scale: int) -> IntMatrix:
    return tuple(tuple(scale if (a, b) == (i, j) else 0 for b in range(n)) for a in range(n))


def _diag(vals: Sequence[int]) -> IntMatrix:
    n = len(vals)
    return tuple(tuple(vals[a] if a == b else 0 for b in range(n)) for a in range(n))


def _spec(name, p, N, basis, images, autos: Sequence[Tuple[str, int, IntMatrix]], realize=True) -> LieAlgebraSpec:
    brackets = _structure_constants(images, p, N)
    L = LieAlgebraSpec(p, N, tuple(basis), brackets, Realization(len(images[0]), tuple(images)) if realize else None,
                       tuple(Automorphism(n, o, m) for n, o, m in autos), name)
    for a in L.automorphisms:
        check_automorphism(L, a.matrix, a.order, a.name)
    return L


def make_dirprod(p: int, N: int = DEFAULT_PRECISION) -> CatalogEntry:
    """Z_p x Z_p = <x> x <y> with sigma fixing x and inverting y."""
    check_context(p, N)
    images = [_diag([p, 0]), _diag([0, p])]
    sigma = _diag([1, p ** N - 1])
    L = _spec(f"dirprod_p{p}", p, N, ["x", "y"], images, [("sigma", 2, sigma)])
    facts = {"sigma": {"fab": False, "type": [1, 1], "fixed_rank": 1, "fpmf": False, "equals_circ": True,
                       "dp_gamma_sigma": 1, "G_cyclic": True, "levels": [2, 3]}}
    return CatalogEntry("dirprod", {"p": p}, L, facts)


def _padic_log_scalar(a: int, p: int, M: int) -> int:
    return mat_log(PadicMatrix.make(p, M, [[a]])).rows[0][0]


def make_semidirect(p: int, k: int = 1, N: int = DEFAULT_PRECISION) -> CatalogEntry:
    """<x, y | x^-1 y x = y^a> with a = 1 + p^k, realized by diag(a^-1, 1) and [[1,p],[0,1]]."""
    check_context(p, N)
    if k < 1:
        raise ValueError("k must be at least 1")
    a = 1 + p ** k
    # log(a^-1) = -log(a), with digits to spare beyond the solve shift
    M = N + k + 2
    log_a = _padic_log_scalar(a, p, M)
    images = [_diag([-log_a, 0]), _unit_matrix(2, 0, 1, p)]
    sigma = _diag([1, p ** N - 1])
    L = _spec(f"semidirect_p{p}_k{k}", p, N, ["x", "y"], images, [("sigma", 2, sigma)])
    facts = {"sigma": {"fab": False, "type": [1, 1], "fixed_rank": 1, "fpmf": True, "equals_circ": False,
                       "dp_gamma_sigma": 2, "G": [p ** k], "level": k + 1}}
    return CatalogEntry("semidirect", {"p": p, "k": k}, L, facts)


def make_heisenberg(p: int, N: int = DEFAULT_PRECISION) -> CatalogEntry:
    """x = diag(p,0), y = diag(0,p), z = p*E12; sigma_A is conjugation by diag(1,-1)."""
    check_context(p, N)
    images = [_diag([p, 0]), _diag([0, p]), _unit_matrix(2, 0, 1, p)]
    sigma_A = _conjugation(images, _diag([1, -1]), p, N)
    L = _spec(f"heisenberg_p{p}", p, N, ["x", "y", "z"], images, [("sigma_A", 2, sigma_A)])
    facts = {"sigma_A": {"fab": False, "type": [2, 1], "fixed_rank": 2, "fpmf": True, "equals_circ": False,
                         "G": [p], "level": 2}}
    return CatalogEntry("heisenberg", {"p": p}, L, facts)


def smallest_nonsquare(p: int) -> int:
    return next(e for e in range(2, p) if pow(e, (p - 1) // 2, p) == p - 1)


def sl_basis(p: int, n: int) -> Tuple[List[str], List[IntMatrix]]:
    names, images = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                names.append(f"E{i + 1}{j + 1}")
                images.append(_unit_matrix(n, i, j, p))
    for i in range(1, n):
        names.append(f"D{i + 1}")
        images.append(_diag([p if a == 0 else (-p if a == i else 0) for a in range(n)]))
    return names, images


def make_sl(p: int, n: int, N: int = DEFAULT_PRECISION) -> CatalogEntry:
    """First congruence subgroup of SL_n(Z_p): basis p*E_ij (i != j) and D_i = diag(p, .., -p at i, ..)."""
    check_context(p, N)
    if n < 2:
        raise ValueError("n must be at least 2")
    names, images = sl_basis(p, n)
    d = n * n - 1
    autos = []
    facts = {}
    if n == 2:
        names = ["x", "y", "z"]
        eps = smallest_nonsquare(p)
        autos.append(("sigma_D", 2, _conjugation(images, _diag([1, -1]), p, N)))
        autos.append(("sigma_eps", 2, _conjugation(images, [[0, eps], [1, 0]], p, N)))
        facts["sigma_D"] = {"fab": True, "type": [1, 2], "fixed_rank": 1, "fixed_names": ["z"], "fpmf": True,
                            "G": [p, p], "dp_gamma_sigma": 3, "level": 2}
        facts["sigma_eps"] = {"fab": True, "type": [1, 2], "fixed_rank": 1, "fpmf": True, "level": 2}
    else:
        for k in range(1, n):
            autos.append((f"sigma_A{k}", 2, _conjugation(images, _diag([1] * k + [-1] * (n - k)), p, N)))
            moved = 2 * k * (n - k)
            facts[f"sigma_A{k}"] = {"fab": True, "type": [d - moved, moved], "fixed_rank": d - moved,
                                    "fpmf": True, "G": [p] * moved, "dp_G": moved, "level": 2}
    L = _spec(f"sl{n}_p{p}", p, N, names, images, autos)
    return CatalogEntry("sl", {"p": p, "n": n}, L, facts)


def make_sl2(p: int, N: int = DEFAULT_PRECISION) -> CatalogEntry:
    return make_sl(p, 2, N)


BUILDERS = {
    "dirprod": make_dirprod,
    "semidirect": make_semidirect,
    "heisenberg": make_heisenberg,
    "sl": make_sl,
    "sl2": make_sl2,
}


def build(name: str, **params) -> CatalogEntry:
    if name not in BUILDERS:
        raise KeyError(f"unknown catalog entry {name!r}; known: {sorted(BUILDERS)}")
    return BUILDERS[name](**params)


def expected_facts(entry: CatalogEntry) -> Dict[str, dict]:
    return entry.facts


def standard_entries(p: int = 3, N: int = DEFAULT_PRECISION) -> List[CatalogEntry]:
    return [make_dirprod(p, N), make_semidirect(p, 1, N), make_heisenberg(p, N), make_sl(p, 2, N), make_sl(p, 3, N)]
