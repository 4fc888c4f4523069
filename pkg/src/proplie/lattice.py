"""Linear algebra over the local ring Z/p^M: Smith form, solving, and canonical submodules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .padic import vp_capped

Matrix = List[List[int]]


def smith(A: Sequence[Sequence[int]], p: int, M: int) -> Tuple[Matrix, List[int], Matrix]:
    """Return (U, vals, V) with U*A*V = diag(p^vals) mod p^M, U and V invertible.

    `vals` lists pivot valuations in order; zero pivots are not listed.
    """
    mod = p ** M
    a = [[int(x) % mod for x in r] for r in A]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    vals: List[int] = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j]:
                    v = vp_capped(a[i][j], p, M)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        e, i, j = best
        a[t], a[i] = a[i], a[t]
        U[t], U[i] = U[i], U[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        for r in V:
            r[t], r[j] = r[j], r[t]
        pe = p ** e
        unit_inv = pow(a[t][t] // pe, -1, mod)
        a[t] = [x * unit_inv % mod for x in a[t]]
        U[t] = [x * unit_inv % mod for x in U[t]]
        for i2 in range(m):
            if i2 != t and a[i2][t]:
                f = a[i2][t] // pe
                a[i2] = [(x - f * y) % mod for x, y in zip(a[i2], a[t])]
                U[i2] = [(x - f * y) % mod for x, y in zip(U[i2], U[t])]
        for j2 in range(t + 1, n):
            if a[t][j2]:
                f = a[t][j2] // pe
                for r in a:
                    r[j2] = (r[j2] - f * r[t]) % mod
                for r in V:
                    r[j2] = (r[j2] - f * r[t]) % mod
        vals.append(e)
    return U, vals, V


def elementary_divisors(A: Sequence[Sequence[int]], p: int, M: int) -> List[int]:
    """Valuations of the nonzero Smith pivots of A over Z/p^M, ascending."""
    if not A:
        return []
    return sorted(smith(A, p, M)[1])


def rank_over_qp(A: Sequence[Sequence[int]], p: int, M: int) -> int:
    """Rank of an integral matrix over Q_p, as far as precision M can certify."""
    return len(elementary_divisors(A, p, M))


class InconsistentSystem(ValueError):
    pass


def solve(A: Sequence[Sequence[int]], b: Sequence[int], p: int, M: int) -> Tuple[List[int], int]:
    """Solve A c = b mod p^M for A of full column rank.

    Returns (c, prec) where c is determined modulo p^prec and prec = M - (largest pivot valuation).
    """
    m = len(A)
    n = len(A[0])
    mod = p ** M
    U, vals, V = smith(A, p, M)
    if len(vals) < n:
        raise InconsistentSystem("matrix does not have full column rank at this precision")
    ub = [sum(u * x for u, x in zip(U[i], b)) % mod for i in range(m)]
    for i in range(n, m):
        if ub[i]:
            raise InconsistentSystem("right-hand side outside the column span")
    prec = M - max(vals, default=0)
    y = []
    for i, e in enumerate(vals):
        if ub[i] % p ** e:
            raise InconsistentSystem("right-hand side outside the column span")
        y.append(ub[i] // p ** e)
    pmod = p ** prec
    c = [sum(V[i][j] * y[j] for j in range(n)) % pmod for i in range(n)]
    return c, prec


def mat_rank_mod_p(A: Sequence[Sequence[int]], p: int) -> int:
    return len(smith([[x % p for x in r] for r in A], p, 1)[1]) if A else 0


def nullspace_mod_p(A: Sequence[Sequence[int]], n: int, p: int) -> List[List[int]]:
    """Basis of {x in F_p^n : A x = 0}."""
    rows = [[x % p for x in r] for r in A]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f] % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Submodule:
    """A submodule of (Z/p^k)^d in canonical Howell form.

    Rows are in echelon form with pivot entries p^v, entries above each pivot reduced
    modulo that pivot, and the row set closed under multiplication by p (saturation),
    so membership is decided by a single reduction pass.
    """

    p: int
    k: int
    d: int
    rows: Tuple[Tuple[int, ...], ...]

    @classmethod
    def span(cls, p: int, k: int, d: int, gens: Sequence[Sequence[int]]) -> "Submodule":
        return cls(p, k, d, _howell(p, k, d, [list(g) for g in gens]))

    @classmethod
    def zero(cls, p: int, k: int, d: int) -> "Submodule":
        return cls(p, k, d, ())

    @classmethod
    def full(cls, p: int, k: int, d: int) -> "Submodule":
        return cls.span(p, k, d, [[int(i == j) for j in range(d)] for i in range(d)])

    def _pivot(self, row: Sequence[int]) -> int:
        return next(i for i, x in enumerate(row) if x)

    def reduce(self, v: Sequence[int]) -> List[int]:
        mod = self.p ** self.k
        w = [int(x) % mod for x in v]
        for row in self.rows:
            c = self._pivot(row)
            if w[c]:
                q = w[c] // row[c]
                w = [(x - q * y) % mod for x, y in zip(w, row)]
        return w

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_all(self, vs) -> bool:
        return all(self.contains(v) for v in vs)

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule.span(self.p, self.k, self.d, list(self.rows) + list(other.rows))

    def extend(self, gens) -> "Submodule":
        return Submodule.span(self.p, self.k, self.d, list(self.rows) + [list(g) for g in gens])

    def log_order(self) -> int:
        """log_p of the number of elements."""
        return sum(self.k - vp_capped(row[self._pivot(row)], self.p, self.k) for row in self.rows)

    def generators(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def quotient_invariants(self) -> List[int]:
        """Invariant factors (as prime powers, ascending) of (Z/p^k)^d modulo this submodule."""
        vals = elementary_divisors(self.rows, self.p, self.k) if self.rows else []
        vals = vals + [self.k] * (self.d - len(vals))
        return sorted(self.p ** v for v in vals if v > 0)

    def image(self, matrix: Sequence[Sequence[int]]) -> "Submodule":
        """Image under the linear map v -> matrix @ v."""
        mod = self.p ** self.k
        gens = [[sum(a * x for a, x in zip(r, row)) % mod for r in matrix] for row in self.rows]
        return Submodule.span(self.p, self.k, self.d, gens)


def _howell(p: int, k: int, d: int, gens: List[List[int]]) -> Tuple[Tuple[int, ...], ...]:
    mod = p ** k
    pool = [[x % mod for x in g] for g in gens]
    pool = [g for g in pool if any(g)]
    out: List[List[int]] = []
    for c in range(d):
        best: Optional[int] = None
        bv = k
        for idx, g in enumerate(pool):
            if g[c]:
                v = vp_capped(g[c], p, k)
                if v < bv:
                    best, bv = idx, v
        if best is None:
            continue
        piv = pool.pop(best)
        unit_inv = pow(piv[c] // p ** bv, -1, mod)
        piv = [x * unit_inv % mod for x in piv]
        pe = p ** bv
        rest = []
        for g in pool:
            if g[c]:
                f = g[c] // pe
                g = [(x - f * y) % mod for x, y in zip(g, piv)]
            if any(g):
                rest.append(g)
        # saturation: p^(k-v) * pivot row vanishes in column c but may not vanish elsewhere
        sat = [x * p ** (k - bv) % mod for x in piv]
        if any(sat):
            rest.append(sat)
        pool = rest
        out.append(piv)
    # reduce entries above pivots
    for i in range(len(out)):
        ci = next(j for j, x in enumerate(out[i]) if x)
        for r in range(i):
            if out[r][ci]:
                f = out[r][ci] // out[i][ci]
                out[r] = [(x - f * y) % mod for x, y in zip(out[r], out[i])]
    return tuple(tuple(r) for r in out)
