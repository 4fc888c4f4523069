"""The uniform group of a powerful Lie algebra under the Campbell-Hausdorff law.

Elements are Lie coordinate vectors; the product is log(exp x exp y) evaluated either from
a truncated series with exact rational coefficients or through a matrix realization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .lattice import elementary_divisors, solve
from .liealg import LieAlgebraSpec, SigmaAction, is_powerful, sigma_adapted_basis
from .padic import vp, vp_capped
from .pmatrix import PadicMatrix, mat_exp, mat_inv, mat_log, mat_mul, mat_pow

Vec = Tuple[int, ...]
Word = Tuple[int, ...]  # letters 0 = X, 1 = Y


class NotPowerful(ValueError):
    pass


class PrecisionCertificateError(AssertionError):
    pass


class ConvergenceFailure(RuntimeError):
    pass


class NoRealization(ValueError):
    pass


# --- the series ------------------------------------------------------------------------------

def default_cutoff(p: int, N: int) -> int:
    """First degree whose terms are certified to vanish mod p^N.

    A degree-n term is an (n-1)-fold bracket, worth valuation n-1 on a powerful algebra, with
    a rational coefficient losing at most (n-1)/(p-1); so it has valuation >= (n-1)(p-2)/(p-1).
    """
    n = 1
    while (n - 1) * (p - 2) < N * (p - 1):
        n += 1
    return n


@lru_cache(maxsize=None)
def _assoc_log_exp(D: int) -> Dict[Word, Fraction]:
    """log(exp X exp Y) in the free associative algebra, all words of length <= D."""
    from math import factorial
    W: Dict[Word, Fraction] = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            if i + j:
                W[(0,) * i + (1,) * j] = Fraction(1, factorial(i) * factorial(j))
    out: Dict[Word, Fraction] = {}
    power: Dict[Word, Fraction] = {(): Fraction(1)}
    for k in range(1, D + 1):
        nxt: Dict[Word, Fraction] = {}
        for u, a in power.items():
            for w, b in W.items():
                if len(u) + len(w) <= D:
                    key = u + w
                    nxt[key] = nxt.get(key, Fraction(0)) + a * b
        power = nxt
        sign = Fraction((-1) ** (k + 1), k)
        for u, a in power.items():
            out[u] = out.get(u, Fraction(0)) + sign * a
    return {u: a for u, a in out.items() if a}


@dataclass(frozen=True)
class DegreePart:
    """Degree-n part written as sum_u q_u ad_u [X, Y] over words u of length n-2."""
    degree: int
    coeffs: Tuple[Fraction, ...]  # indexed by the binary value of u, first letter most significant


@dataclass(frozen=True)
class CHSeries:
    max_degree: int
    parts: Tuple[DegreePart, ...]  # degrees 2..max_degree

    def part(self, n: int) -> DegreePart:
        return self.parts[n - 2]

    def denominator_valuation(self, n: int, p: int) -> int:
        den = 1
        for q in self.part(n).coeffs:
            den = lcm(den, q.denominator)
        return vp(den, p) if den % p == 0 else 0


@lru_cache(maxsize=None)
def degree_part(n: int) -> DegreePart:
    """Degree-n part (n >= 2) in right-normed bracket form.

    By the Dynkin-Specht-Wever lemma a homogeneous Lie element P of degree n equals
    (1/n) sum_w c_w [w], where [w] is the right-normed bracket of the word w. Words ending
    in XX or YY give zero, and [.., Y, X] = -[.., X, Y].
    """
    assoc = _assoc_log_exp(n)
    m = n - 2
    coeffs = []
    for idx in range(2 ** m):
        u = tuple((idx >> (m - 1 - t)) & 1 for t in range(m))
        c = assoc.get(u + (0, 1), Fraction(0)) - assoc.get(u + (1, 0), Fraction(0))
        coeffs.append(c / n)
    return DegreePart(n, tuple(coeffs))


@lru_cache(maxsize=None)
def ch_series(D: int) -> CHSeries:
    assoc = _assoc_log_exp(1)
    assert assoc.get((0,)) == 1 and assoc.get((1,)) == 1
    series = CHSeries(D, tuple(degree_part(n) for n in range(2, D + 1)))
    if D >= 2:
        assert series.part(2).coeffs == (Fraction(1, 2),)
    return series


@lru_cache(maxsize=None)
def _degree_denominator(n: int, p: int) -> Tuple[int, int]:
    """(e, unit) with p^e * unit the common denominator of the degree-n coefficients."""
    den = 1
    for q in degree_part(n).coeffs:
        den = lcm(den, q.denominator)
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    if e > n - 1:
        raise PrecisionCertificateError(f"degree {n}: denominator valuation {e} exceeds bracket credit {n - 1}")
    return e, den


class SeriesEvaluator:
    """Evaluates the CH product for one algebra at a fixed precision p^T.

    T may exceed the algebra's own precision; the structure constants are then read as
    integer lifts, which is what the limit constructions need. Degrees are truncated per
    call from the input valuation, so only the needed part of the series is ever built.
    """

    def __init__(self, L: LieAlgebraSpec, T: int):
        if not is_powerful(L):
            raise NotPowerful(f"algebra {L.name or ''} is not powerful")
        self.L, self.p, self.T, self.d = L, L.p, T, L.d
        self.mod = self.p ** T
        self.max_degree = default_cutoff(self.p, T) - 1
        self._tensors = {}
        self._coefs = {}

    def _tensor(self, dtype):
        if dtype not in self._tensors:
            C = np.zeros((self.d, self.d, self.d), dtype=dtype)
            for i, j, c in self.L.sparse:
                for k, v in enumerate(c):
                    C[i, j, k] = v
                    C[j, i, k] = -v
            self._tensors[dtype] = C
        return self._tensors[dtype]

    def _coef(self, n: int, wide: int, dtype):
        key = (n, wide, dtype)
        if key not in self._coefs:
            e, unit = _degree_denominator(n, self.p)
            den = self.p ** e * unit
            ints = np.array([int(q * den) % wide for q in degree_part(n).coeffs], dtype=dtype)
            self._coefs[key] = (ints, e, pow(unit, -1, self.mod))
        return self._coefs[key]

    def last_degree(self, v: int) -> int:
        """Largest degree kept for inputs of valuation >= v.

        Degree n contributes valuation >= n*v + (n-1)(p-2)/(p-1), increasing in n.
        """
        p, T = self.p, self.T
        n = 1
        while (n + 1) * v * (p - 1) + n * (p - 2) < T * (p - 1):
            n += 1
        return min(n, self.max_degree)

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        mod, p, d = self.mod, self.p, self.d
        v = min(vp_capped(int(a), p, self.T) for a in list(x) + list(y))
        top = self.last_degree(v)
        plain = tuple((int(a) + int(b)) % mod for a, b in zip(x, y))
        if top < 2 or v >= self.T:
            return plain
        extra = max(_degree_denominator(n, p)[0] for n in range(2, top + 1))
        wide = p ** (self.T + extra)
        dtype = np.int64 if wide * wide * d * 4 < 2 ** 62 else object
        C = self._tensor(dtype)
        xv = np.array([int(a) % wide for a in x], dtype=dtype)
        yv = np.array([int(a) % wide for a in y], dtype=dtype)
        # ad_x[k, j] = sum_i x_i C[i, j, k]
        adx = np.tensordot(xv, C, axes=(0, 0)).T % wide
        ady = np.tensordot(yv, C, axes=(0, 0)).T % wide
        base = adx.dot(yv) % wide
        total = [int(a) for a in plain]
        if not base.any():
            return plain
        level = base.reshape(d, 1)
        for n in range(2, top + 1):
            if n > 2:
                level = np.concatenate([adx.dot(level) % wide, ady.dot(level) % wide], axis=1)
            ints, e, unit_inv = self._coef(n, wide, dtype)
            s = level.dot(ints) % wide
            pe = p ** e
            for k in range(d):
                a = int(s[k])
                if a % pe:
                    raise PrecisionCertificateError(f"degree {n} term not divisible by p^{e}")
                total[k] = (total[k] + (a // pe) * unit_inv) % mod
        return tuple(total)


@lru_cache(maxsize=256)
def _series_evaluator(L: LieAlgebraSpec, T: int) -> SeriesEvaluator:
    return SeriesEvaluator(L, T)


class MatrixEvaluator:
    """CH product through mat_log(mat_exp(x) mat_exp(y)) in a faithful matrix realization."""

    def __init__(self, L: LieAlgebraSpec, T: int):
        if L.realization is None:
            raise NoRealization(f"algebra {L.name or ''} has no matrix realization")
        self.L, self.p, self.T = L, L.p, T
        R = L.realization
        self.n = R.n
        # columns of A are the flattened images; the solve loses the largest pivot valuation
        self.A = [[R.images[k][a][b] for k in range(L.d)] for a in range(R.n) for b in range(R.n)]
        vals = elementary_divisors(self.A, self.p, T + 64)
        if len(vals) < L.d:
            raise NoRealization("realization images are linearly dependent")
        self.shift = max(vals)
        self.M = T + self.shift
        self.images = [PadicMatrix.make(self.p, self.M, img) for img in R.images]

    def to_matrix(self, x: Sequence[int]) -> PadicMatrix:
        p, M, n = self.p, self.M, self.n
        rows = [[sum(int(c) * img.rows[a][b] for c, img in zip(x, self.images)) for b in range(n)]
                for a in range(n)]
        return PadicMatrix.make(p, M, rows)

    def from_matrix(self, Z: PadicMatrix) -> Vec:
        b = [Z.rows[a][c] for a in range(self.n) for c in range(self.n)]
        coords, prec = solve(self.A, b, self.p, self.M)
        assert prec >= self.T
        return tuple(c % self.p ** self.T for c in coords)

    def exp(self, x: Sequence[int]) -> PadicMatrix:
        return mat_exp(self.to_matrix(x))

    def log(self, U: PadicMatrix) -> Vec:
        return self.from_matrix(mat_log(U))

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        return self.log(mat_mul(self.exp(x), self.exp(y)))


@lru_cache(maxsize=64)
def _matrix_evaluator(L: LieAlgebraSpec, T: int) -> MatrixEvaluator:
    return MatrixEvaluator(L, T)


def evaluator(L: LieAlgebraSpec, T: Optional[int] = None, backend: str = "series"):
    T = L.N if T is None else T
    if backend == "series":
        return _series_evaluator(L, T)
    if backend == "matrix":
        return _matrix_evaluator(L, T)
    raise ValueError(f"unknown backend {backend!r}")


# --- group elements --------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    algebra: LieAlgebraSpec
    coords: Vec

    @classmethod
    def make(cls, L: LieAlgebraSpec, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != L.d:
            raise ValueError(f"expected {L.d} coordinates")
        return cls(L, tuple(int(c) % L.modulus for c in coords))

    @classmethod
    def identity(cls, L: LieAlgebraSpec) -> "GroupElement":
        return cls(L, (0,) * L.d)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return bch_mul(self, other)

    def to_json(self) -> list:
        return list(self.coords)


def _same(x: GroupElement, y: GroupElement) -> LieAlgebraSpec:
    if x.algebra is not y.algebra:
        raise ValueError("elements belong to different algebras")
    return x.algebra


def bch_mul(x: GroupElement, y: GroupElement, backend: str = "series") -> GroupElement:
    L = _same(x, y)
    return GroupElement(L, evaluator(L, backend=backend).mul(x.coords, y.coords))


def grp_inv(x: GroupElement) -> GroupElement:
    L = x.algebra
    inv = GroupElement(L, tuple(-c % L.modulus for c in x.coords))
    if not bch_mul(x, inv).is_identity():
        raise PrecisionCertificateError("x * (-x) is not the identity")
    return inv


def _pow_coords(ev, x: Sequence[int], a: int, mod: int) -> Vec:
    if a < 0:
        x, a = tuple(-c % mod for c in x), -a
    result: Vec = (0,) * len(x)
    base = tuple(x)
    while a:
        if a & 1:
            result = ev.mul(result, base)
        base = ev.mul(base, base)
        a >>= 1
    return result


def grp_pow(x: GroupElement, a: int, backend: str = "series") -> GroupElement:
    L = x.algebra
    return GroupElement(L, _pow_coords(evaluator(L, backend=backend), x.coords, a, L.modulus))


def commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    """x^-1 y^-1 x y."""
    return bch_mul(bch_mul(grp_inv(x), grp_inv(y)), bch_mul(x, y))


# --- coordinates of the second kind ----------------------------------------------------------

def _basis_columns(L: LieAlgebraSpec, basis: Optional[Sequence[Sequence[int]]]) -> List[Vec]:
    if basis is None:
        return [L.unit(i) for i in range(L.d)]
    return [tuple(int(c) % L.modulus for c in b) for b in basis]


def from_second_kind(L: LieAlgebraSpec, exponents: Sequence[int],
                     basis: Optional[Sequence[Sequence[int]]] = None) -> GroupElement:
    """x_1^{a_1} ... x_d^{a_d}; a power of a single element is a scalar multiple in coordinates."""
    cols = _basis_columns(L, basis)
    mod = L.modulus
    out = GroupElement.identity(L)
    for a, b in zip(exponents, cols):
        out = bch_mul(out, GroupElement(L, tuple(a * c % mod for c in b)))
    return out


def to_second_kind(x: GroupElement, basis: Optional[Sequence[Sequence[int]]] = None) -> Tuple[int, ...]:
    """Exponents (a_1..a_d) with x = x_1^{a_1} ... x_d^{a_d}, found one p-adic digit at a time."""
    L = x.algebra
    p, N, d, mod = L.p, L.N, L.d, L.modulus
    cols = _basis_columns(L, basis)
    B = [[cols[j][i] for j in range(d)] for i in range(d)]
    a = [0] * d
    for m in range(N + 1):
        y = from_second_kind(L, a, cols)
        z = bch_mul(grp_inv(y), x).coords
        if not any(z):
            return tuple(a)
        if m == N or any(c % p ** m for c in z):
            raise AssertionError("second-kind solver failed to gain a digit")
        c, _ = solve(B, z, p, N)
        a = [(u + v) % mod for u, v in zip(a, c)]
    raise AssertionError("second-kind solver did not converge")


# --- limit constructions ---------------------------------------------------------------------

def _mat_pow_coords(ev: MatrixEvaluator, x: Sequence[int], e: int) -> PadicMatrix:
    return mat_pow(ev.exp(x), e)


def _scaled(x: Sequence[int], a: int, mod: int) -> Vec:
    # x^a = a*x: all brackets inside a cyclic subgroup vanish, so no series evaluation is needed
    return tuple(a * c % mod for c in x)


def additive_limit(x: GroupElement, y: GroupElement, backend: str = "series") -> Vec:
    """lim_n p^-n (x^{p^n} y^{p^n}), computed at working precision N + 2n."""
    L = _same(x, y)
    p, N = L.p, L.N
    prev = None
    for n in range(1, N + 3):
        T = N + 2 * n
        pn = p ** n
        if backend == "series":
            ev = evaluator(L, T, "series")
            w = ev.mul(_scaled(x.coords, pn, p ** T), _scaled(y.coords, pn, p ** T))
        else:
            ev = evaluator(L, T, "matrix")
            w = ev.log(mat_mul(_mat_pow_coords(ev, x.coords, pn), _mat_pow_coords(ev, y.coords, pn)))
        if any(c % pn for c in w):
            raise ConvergenceFailure("x^{p^n} y^{p^n} is not a p^n-th power in coordinates")
        val = tuple((c // pn) % p ** N for c in w)
        if val == prev:
            return val
        prev = val
    raise ConvergenceFailure(f"additive limit did not stabilize within {N + 2} steps")


def bracket_limit(x: GroupElement, y: GroupElement, backend: str = "series") -> Vec:
    """lim_n p^-2n [x^{p^n}, y^{p^n}] with the group commutator."""
    L = _same(x, y)
    p, N = L.p, L.N
    prev = None
    for n in range(1, N + 3):
        T = N + 2 * n
        pn = p ** n
        mod = p ** T
        if backend == "series":
            ev = evaluator(L, T, "series")
            xs, ys = _scaled(x.coords, pn, mod), _scaled(y.coords, pn, mod)
            w = ev.mul(ev.mul(_scaled(xs, -1, mod), _scaled(ys, -1, mod)), ev.mul(xs, ys))
        else:
            ev = evaluator(L, T, "matrix")
            X = _mat_pow_coords(ev, x.coords, pn)
            Y = _mat_pow_coords(ev, y.coords, pn)
            w = ev.log(mat_mul(mat_mul(mat_inv(X), mat_inv(Y)), mat_mul(X, Y)))
        p2n = pn * pn
        if any(c % p2n for c in w):
            raise ConvergenceFailure("commutator not divisible by p^{2n} in coordinates")
        val = tuple((c // p2n) % p ** N for c in w)
        if val == prev:
            return val
        prev = val
    raise ConvergenceFailure(f"bracket limit did not stabilize within {N + 2} steps")


# --- fixed points ----------------------------------------------------------------------------

def fixed_subgroup_generators(L: LieAlgebraSpec, sigma: SigmaAction) -> List[GroupElement]:
    B = sigma_adapted_basis(L, sigma)
    return [GroupElement(L, v) for v in B.fixed()]


def sigma_apply(sigma: SigmaAction, x: GroupElement) -> GroupElement:
    return GroupElement(x.algebra, sigma.apply(x.coords))
