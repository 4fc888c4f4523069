"""Powerful Z_p-Lie algebras given by structure constants, with automorphism tools."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .lattice import rank_over_qp
from .padic import check_context, teichmuller

Vec = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


class LieAlgebraError(ValueError):
    pass


class JacobiViolation(LieAlgebraError):
    pass


class RealizationMismatch(LieAlgebraError):
    pass


class OrderViolation(LieAlgebraError):
    pass


class BracketViolation(LieAlgebraError):
    def __init__(self, pair, lhs, rhs):
        self.pair = pair
        super().__init__(f"bracket of basis pair {pair} not preserved: {lhs} != {rhs}")


class UnsupportedOrder(LieAlgebraError):
    pass


class PreconditionError(LieAlgebraError):
    pass


def _as_int(v) -> int:
    return int(v) if not isinstance(v, str) else int(v.strip())


def _matrix(rows, mod: Optional[int] = None) -> IntMatrix:
    out = tuple(tuple(_as_int(v) for v in r) for r in rows)
    if mod is not None:
        out = tuple(tuple(v % mod for v in r) for r in out)
    return out


def matmul_mod(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], mod: int) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % mod for c in cols) for r in a)


def matvec_mod(a: Sequence[Sequence[int]], v: Sequence[int], mod: int) -> Vec:
    return tuple(sum(x * y for x, y in zip(r, v)) % mod for r in a)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Automorphism:
    name: str
    order: int
    matrix: IntMatrix  # acts on coordinate column vectors


@dataclass(frozen=True)
class Realization:
    n: int
    images: Tuple[IntMatrix, ...]  # exact integer lifts, one per basis element


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    p: int
    N: int
    basis: Tuple[str, ...]
    brackets: Dict[Tuple[int, int], Vec]  # only i < j; antisymmetry is synthesized
    realization: Optional[Realization] = None
    automorphisms: Tuple[Automorphism, ...] = ()
    name: str = ""

    def __post_init__(self):
        check_context(self.p, self.N)
        mod = self.p ** self.N
        d = len(self.basis)
        clean = {}
        for (i, j), c in self.brackets.items():
            if not (0 <= i < j < d):
                raise LieAlgebraError(f"bracket index pair ({i},{j}) must satisfy 0 <= i < j < {d}")
            if len(c) != d:
                raise LieAlgebraError(f"bracket ({i},{j}) has {len(c)} coefficients, expected {d}")
            vec = tuple(_as_int(v) % mod for v in c)
            if any(vec):
                clean[(i, j)] = vec
        object.__setattr__(self, "brackets", clean)
        self._check_jacobi()
        if self.realization is not None:
            self._check_realization()

    @property
    def d(self) -> int:
        return len(self.basis)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @cached_property
    def table(self) -> List[List[Vec]]:
        """Full table c[i][j] including antisymmetric and diagonal entries."""
        d, mod = self.d, self.modulus
        zero = (0,) * d
        t = [[zero] * d for _ in range(d)]
        for (i, j), c in self.brackets.items():
            t[i][j] = c
            t[j][i] = tuple(-v % mod for v in c)
        return t

    @cached_property
    def sparse(self) -> List[Tuple[int, int, Vec]]:
        return sorted((i, j, c) for (i, j), c in self.brackets.items())

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            return name_or_index
        return self.basis.index(name_or_index)

    def unit(self, i: int) -> Vec:
        return tuple(int(k == i) for k in range(self.d))

    def automorphism(self, name: str) -> Automorphism:
        for a in self.automorphisms:
            if a.name == name:
                return a
        raise KeyError(f"no automorphism named {name!r}; known: {[a.name for a in self.automorphisms]}")

    def _check_jacobi(self) -> None:
        d = self.d
        for a in range(d):
            for b in range(a + 1, d):
                for c in range(b + 1, d):
                    ea, eb, ec = self.unit(a), self.unit(b), self.unit(c)
                    s = [0] * d
                    for x, y, z in ((ea, eb, ec), (eb, ec, ea), (ec, ea, eb)):
                        t = bracket(self, x, bracket(self, y, z))
                        s = [u + v for u, v in zip(s, t)]
                    if any(v % self.modulus for v in s):
                        raise JacobiViolation(f"Jacobi fails on basis triple {(a, b, c)}")

    def _check_realization(self) -> None:
        R = self.realization
        if len(R.images) != self.d:
            raise RealizationMismatch("realization needs one image per basis element")
        mod = self.modulus
        for i in range(self.d):
            for j in range(i + 1, self.d):
                A, B = R.images[i], R.images[j]
                comm = [[(x - y) % mod for x, y in zip(r, s)]
                        for r, s in zip(matmul_mod(A, B, mod), matmul_mod(B, A, mod))]
                c = self.table[i][j]
                expect = [[sum(c[k] * R.images[k][a][b] for k in range(self.d)) % mod
                           for b in range(R.n)] for a in range(R.n)]
                if comm != expect:
                    raise RealizationMismatch(f"matrix commutator of {self.basis[i]},{self.basis[j]} "
                                              "disagrees with the structure constants")

    def with_precision(self, N: int) -> "LieAlgebraSpec":
        """Same integer data read modulo p^N (structure constants are reduced, not lifted)."""
        return LieAlgebraSpec(self.p, N, self.basis, dict(self.brackets), self.realization,
                              self.automorphisms, self.name)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "p": self.p,
            "precision": self.N,
            "dim": self.d,
            "basis": list(self.basis),
            "brackets": [{"i": i, "j": j, "coeffs": list(c)} for i, j, c in self.sparse],
            "automorphisms": [{"name": a.name, "order": a.order, "matrix": [list(r) for r in a.matrix]}
                              for a in self.automorphisms],
        }
        if self.realization is not None:
            out["matrix_realization"] = {
                "n": self.realization.n,
                "images": [[[str(v) if abs(v) >= 2 ** 53 else v for v in r] for r in m]
                           for m in self.realization.images],
            }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebraSpec":
        try:
            p = _as_int(data["p"])
            N = _as_int(data["precision"])
            basis = tuple(str(b) for b in data["basis"])
        except KeyError as exc:
            raise LieAlgebraError(f"missing field {exc}") from None
        if "dim" in data and _as_int(data["dim"]) != len(basis):
            raise LieAlgebraError("dim does not match basis length")

        def idx(v):
            return basis.index(v) if isinstance(v, str) and not v.strip().lstrip("-").isdigit() else _as_int(v)

        mod = p ** N
        brackets: Dict[Tuple[int, int], Vec] = {}
        for entry in data.get("brackets", []):
            i, j = idx(entry["i"]), idx(entry["j"])
            c = [_as_int(v) for v in entry["coeffs"]]
            if i == j:
                if any(v % mod for v in c):
                    raise LieAlgebraError(f"nonzero self-bracket at {i}")
                continue
            if i > j:
                i, j, c = j, i, [-v for v in c]
            if (i, j) in brackets:
                raise LieAlgebraError(f"bracket ({i},{j}) given twice")
            brackets[(i, j)] = tuple(c)
        real = None
        if data.get("matrix_realization"):
            r = data["matrix_realization"]
            real = Realization(_as_int(r["n"]), tuple(_matrix(m) for m in r["images"]))
        autos = tuple(Automorphism(str(a["name"]), _as_int(a["order"]), _matrix(a["matrix"], mod))
                      for a in data.get("automorphisms", []))
        return cls(p, N, basis, brackets, real, autos, str(data.get("name", "")))


def load_algebra(path) -> LieAlgebraSpec:
    return LieAlgebraSpec.from_json(json.loads(Path(path).read_text()))


def bracket(L: LieAlgebraSpec, x: Sequence[int], y: Sequence[int]) -> Vec:
    d, mod = L.d, L.modulus
    out = [0] * d
    for i, j, c in L.sparse:
        coef = x[i] * y[j] - x[j] * y[i]
        if coef:
            for k in range(d):
                if c[k]:
                    out[k] += coef * c[k]
    return tuple(v % mod for v in out)


def is_powerful(L: LieAlgebraSpec) -> bool:
    return all(v % L.p == 0 for c in L.brackets.values() for v in c)


def bracket_matrix(L: LieAlgebraSpec) -> List[List[int]]:
    """All c_ij (i<j) stacked as rows."""
    d = L.d
    return [list(L.table[i][j]) for i in range(d) for j in range(i + 1, d)]


def is_fab(L: LieAlgebraSpec) -> bool:
    """True when the derived algebra has full rank over Q_p.

    Ranks come from elementary divisors of the bracket matrix over Z/p^N: a pivot of
    valuation < N is certainly nonzero, and rank mod p would undercount since every
    bracket of a powerful algebra lies in pL.
    """
    rows = bracket_matrix(L)
    if not rows:
        return False
    return rank_over_qp(rows, L.p, L.N) == L.d


@dataclass(frozen=True, eq=False)
class SigmaAction:
    algebra: LieAlgebraSpec = field(repr=False)
    matrix: IntMatrix
    order: int
    name: str = ""

    def apply(self, x: Sequence[int]) -> Vec:
        return matvec_mod(self.matrix, x, self.algebra.modulus)


def mat_power(A: Sequence[Sequence[int]], e: int, mod: int) -> IntMatrix:
    result = identity(len(A))
    base = tuple(tuple(v % mod for v in r) for r in A)
    while e:
        if e & 1:
            result = matmul_mod(result, base, mod)
        base = matmul_mod(base, base, mod)
        e >>= 1
    return result


def check_automorphism(L: LieAlgebraSpec, A: Sequence[Sequence[int]], ell: int, name: str = "") -> SigmaAction:
    mod, d, p = L.modulus, L.d, L.p
    A = _matrix(A, mod)
    if len(A) != d or any(len(r) != d for r in A):
        raise LieAlgebraError(f"automorphism matrix must be {d}x{d}")
    if ell < 1:
        raise OrderViolation("order must be positive")
    from .lattice import mat_rank_mod_p
    if mat_rank_mod_p(A, p) != d:
        raise LieAlgebraError("matrix is not invertible mod p")
    if mat_power(A, ell, mod) != identity(d):
        raise OrderViolation(f"matrix^{ell} is not the identity mod {p}^{L.N}")
    cols = [tuple(A[r][c] for r in range(d)) for c in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            lhs = matvec_mod(A, L.table[i][j], mod)
            rhs = bracket(L, cols[i], cols[j])
            if lhs != rhs:
                raise BracketViolation((L.basis[i], L.basis[j]), lhs, rhs)
    return SigmaAction(L, A, ell, name)


def named_sigma(L: LieAlgebraSpec, name: str) -> SigmaAction:
    a = L.automorphism(name)
    return check_automorphism(L, a.matrix, a.order, a.name)


def primitive_root_of_order(ell: int, p: int) -> int:
    """Smallest positive integer of multiplicative order exactly ell mod p."""
    if (p - 1) % ell:
        raise UnsupportedOrder(f"order {ell} does not divide p-1={p - 1}")
    for w in range(1, p):
        if pow(w, ell, p) == 1 and all(pow(w, ell // q, p) != 1 for q in _prime_factors(ell)):
            return w
    raise AssertionError("no root found")


def _prime_factors(n: int) -> List[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class AdaptedBasis:
    vectors: Tuple[Vec, ...]  # new basis, in old coordinates
    chars: Tuple[int, ...]  # character index j: sigma acts by omega^j
    eigenvalues: Tuple[int, ...]  # omega^j lifted to Z/p^N
    omega: int

    @property
    def r(self) -> int:
        return sum(1 for c in self.chars if c == 0)

    def fixed(self) -> Tuple[Vec, ...]:
        return tuple(v for v, c in zip(self.vectors, self.chars) if c == 0)


def sigma_adapted_basis(L: LieAlgebraSpec, sigma: SigmaAction) -> AdaptedBasis:
    p, N, d, mod, ell = L.p, L.N, L.d, L.modulus, sigma.order
    if (p - 1) % ell:
        raise UnsupportedOrder(f"order {ell} does not divide p-1={p - 1}")
    omega = primitive_root_of_order(ell, p)
    w = teichmuller(omega, p, N) if ell > 1 else 1
    powers = [mat_power(sigma.matrix, i, mod) for i in range(ell)]
    ell_inv = pow(ell, -1, mod)
    vectors: List[Vec] = []
    chars: List[int] = []
    eig: List[int] = []
    for j in range(ell):
        lam = pow(w, j, mod)
        lam_inv = pow(lam, -1, mod)
        P = [[0] * d for _ in range(d)]
        for i in range(ell):
            c = pow(lam_inv, i, mod)
            for a in range(d):
                for b in range(d):
                    P[a][b] += c * powers[i][a][b]
        P = [[v * ell_inv % mod for v in r] for r in P]
        picked: List[Vec] = []
        for b in range(d):
            col = tuple(P[a][b] for a in range(d))
            if _independent_mod_p(picked + [col], p):
                picked.append(col)
        vectors.extend(picked)
        chars.extend([j] * len(picked))
        eig.extend([lam] * len(picked))
    if len(vectors) != d:
        raise AssertionError("eigenspace decomposition did not produce a basis")
    for v, lam in zip(vectors, eig):
        assert sigma.apply(v) == tuple(lam * x % mod for x in v)
    return AdaptedBasis(tuple(vectors), tuple(chars), tuple(eig), omega)


def _independent_mod_p(vs: List[Vec], p: int) -> bool:
    from .lattice import mat_rank_mod_p
    return mat_rank_mod_p([list(v) for v in vs], p) == len(vs)


@dataclass(frozen=True)
class SigmaType:
    r: int
    d: int
    multiplicities: Tuple[int, ...]

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.r, self.d - self.r)


def sigma_type(L: LieAlgebraSpec, sigma: SigmaAction) -> SigmaType:
    """Character multiplicities of sigma on L/pL; r is the trivial one."""
    B = sigma_adapted_basis(L, sigma)
    mults = tuple(sum(1 for c in B.chars if c == j) for j in range(sigma.order))
    return SigmaType(mults[0], L.d, mults)


def involution_type_constraint(L: LieAlgebraSpec, sigma: SigmaAction) -> dict:
    """For an involution of a FAb algebra of dimension > 1: at least one fixed and two moved directions."""
    if sigma.order != 2:
        raise PreconditionError("needs an involution")
    if L.d <= 1:
        raise PreconditionError("needs dimension > 1")
    if not is_fab(L):
        raise PreconditionError("needs a FAb algebra")
    t = sigma_type(L, sigma)
    r, s = t.pair
    return {"pass": r >= 1 and s >= 2, "type": [r, s], "fixed_nonzero": r >= 1, "moved_at_least_two": s >= 2}
