"""Square matrices over Z/p^N, with exp and log on their p-adic convergence domains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .padic import PadicInt, PrecisionMismatch, check_context, vp, vp_capped, vp_factorial


class OutsideConvergenceDomain(ValueError):
    pass


Rows = Tuple[Tuple[int, ...], ...]


def _mul(a: Rows, b: Rows, mod: int) -> Rows:
    n = len(a)
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(a[i], cols[j])) % mod for j in range(n)) for i in range(n))


def _identity(n: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class PadicMatrix:
    p: int
    N: int
    rows: Rows

    @classmethod
    def make(cls, p: int, N: int, rows: Sequence[Sequence[int]]) -> "PadicMatrix":
        check_context(p, N)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        mod = p ** N
        return cls(p, N, tuple(tuple(int(v) % mod for v in r) for r in rows))

    @classmethod
    def identity(cls, p: int, N: int, n: int) -> "PadicMatrix":
        return cls.make(p, N, _identity(n))

    @classmethod
    def zero(cls, p: int, N: int, n: int) -> "PadicMatrix":
        return cls.make(p, N, [[0] * n for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def entry(self, i: int, j: int) -> PadicInt:
        return PadicInt(self.p, self.N, self.rows[i][j])

    def min_val(self) -> int:
        """Smallest entry valuation, capped at N."""
        return min((vp_capped(v, self.p, self.N) for r in self.rows for v in r), default=self.N)

    def _check(self, other: "PadicMatrix") -> None:
        if (self.p, self.N) != (other.p, other.N):
            raise PrecisionMismatch(f"({self.p},{self.N}) vs ({other.p},{other.N})")
        if self.n != other.n:
            raise ValueError(f"dimension mismatch {self.n} vs {other.n}")

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check(other)
        mod = self.modulus
        return PadicMatrix(self.p, self.N, tuple(
            tuple((x - y) % mod for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        return mat_mul(self, other)

    def scale(self, c: int) -> "PadicMatrix":
        mod = self.modulus
        return PadicMatrix(self.p, self.N, tuple(tuple(c * x % mod for x in r) for r in self.rows))

    def reduce(self, N: int) -> "PadicMatrix":
        if N > self.N:
            raise ValueError("cannot raise precision by reduction")
        return PadicMatrix.make(self.p, N, self.rows)

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "entries": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "PadicMatrix":
        return cls.make(int(data["p"]), int(data["N"]), [[int(v) for v in r] for r in data["entries"]])


def mat_mul(a: PadicMatrix, b: PadicMatrix) -> PadicMatrix:
    a._check(b)
    return PadicMatrix(a.p, a.N, _mul(a.rows, b.rows, a.modulus))


def mat_add(a: PadicMatrix, b: PadicMatrix) -> PadicMatrix:
    a._check(b)
    mod = a.modulus
    return PadicMatrix(a.p, a.N, tuple(
        tuple((x + y) % mod for x, y in zip(r, s)) for r, s in zip(a.rows, b.rows)))


def mat_pow(a: PadicMatrix, e: int) -> PadicMatrix:
    if e < 0:
        raise ValueError("negative exponent")
    result = _identity(a.n)
    base = a.rows
    mod = a.modulus
    while e:
        if e & 1:
            result = _mul(result, base, mod)
        base = _mul(base, base, mod)
        e >>= 1
    return PadicMatrix(a.p, a.N, tuple(tuple(v % mod for v in r) for r in result))


def exp_cutoff(p: int, N: int, m: int) -> int:
    """Last index K kept in the exponential series of a matrix with entry valuation >= m.

    Term k has valuation >= m*k - v_p(k!) >= m*k - (k-1)/(p-1), which increases with k,
    so every k > K is dropped once m*(K+1) - K/(p-1) >= N.
    """
    K = 0
    while (p - 1) * m * (K + 1) - K < (p - 1) * N:
        K += 1
    return K


def log_cutoff(p: int, N: int, m: int) -> int:
    """Last index K kept in the log series of I + A with entry valuation of A >= m.

    Term k has valuation >= m*k - v_p(k) >= m*k - floor(log_p k), nondecreasing in k.
    """
    def bound(k: int) -> int:
        e, q = 0, p
        while q <= k:
            e += 1
            q *= p
        return m * k - e

    K = 1
    while bound(K + 1) < N:
        K += 1
    return K


def _exp_rows(rows: Rows, p: int, N: int, m: int) -> Rows:
    n = len(rows)
    K = exp_cutoff(p, N, m)
    extra = vp_factorial(K, p)
    wide = p ** (N + extra)
    mod = p ** N
    acc = [list(r) for r in _identity(n)]
    power = _identity(n)
    lifted = tuple(tuple(v % wide for v in r) for r in rows)
    fact = 1
    for k in range(1, K + 1):
        power = _mul(power, lifted, wide)
        fact *= k
        v = vp_factorial(k, p)
        unit_inv = pow(fact // p ** v, -1, mod)
        pv = p ** v
        for i in range(n):
            for j in range(n):
                x = power[i][j]
                assert x % pv == 0, "exp term not p-integral"
                acc[i][j] = (acc[i][j] + (x // pv) * unit_inv) % mod
    return tuple(tuple(r) for r in acc)


def mat_exp(M: PadicMatrix) -> PadicMatrix:
    m = M.min_val()
    if m < 1:
        raise OutsideConvergenceDomain("exp needs every entry divisible by p")
    if m >= M.N:
        return PadicMatrix.identity(M.p, M.N, M.n)
    return PadicMatrix(M.p, M.N, _exp_rows(M.rows, M.p, M.N, m))


def mat_log(U: PadicMatrix) -> PadicMatrix:
    p, N, n = U.p, U.N, U.n
    A = U - PadicMatrix.identity(p, N, n)
    m = A.min_val()
    if m < 1:
        raise OutsideConvergenceDomain("log needs U congruent to I mod p")
    if m >= N:
        return PadicMatrix.zero(p, N, n)
    K = log_cutoff(p, N, m)
    extra = max(vp(k, p) for k in range(1, K + 1))
    wide = p ** (N + extra)
    mod = p ** N
    acc = [[0] * n for _ in range(n)]
    power = _identity(n)
    for k in range(1, K + 1):
        power = _mul(power, A.rows, wide)
        v = vp(k, p)
        unit_inv = pow((k // p ** v) * (-1) ** (k + 1), -1, mod)
        pv = p ** v
        for i in range(n):
            for j in range(n):
                x = power[i][j]
                assert x % pv == 0, "log term not p-integral"
                acc[i][j] = (acc[i][j] + (x // pv) * unit_inv) % mod
    return PadicMatrix(p, N, tuple(tuple(r) for r in acc))


def mat_inv(U: PadicMatrix) -> PadicMatrix:
    """Inverse of a matrix invertible mod p, by Gauss-Jordan over Z/p^N."""
    p, N, n = U.p, U.N, U.n
    mod = p ** N
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(U.rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] % p), None)
        if piv is None:
            raise ValueError("matrix not invertible mod p")
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], -1, mod)
        a[c] = [v * inv % mod for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % mod for x, y in zip(a[r], a[c])]
    return PadicMatrix(p, N, tuple(tuple(r[n:]) for r in a))
