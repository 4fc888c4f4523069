"""Finite quotients Gamma/Gamma_{k+1} and the fixed-point / Frattini computations on them.

Two subgroup engines are provided:

* explicit: subgroups are hashed element sets built by orbit closure, capped by a budget;
* class2: at level 2 the quotient has class <= 2 and odd order, so Baer's correspondence
  turns subgroups into submodules of (Z/p^2)^d closed under a bilinear commutator form.
  Coordinates are changed from Lie coordinates to Baer coordinates first: for p = 3 the
  level-2 law in Lie coordinates is not x + y + (1/2)[x, y], since the degree-3 term
  (1/12)[x, [x, y]] survives mod 9.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .chgroup import GroupElement, evaluator, from_second_kind, to_second_kind
from .lattice import Submodule, mat_rank_mod_p
from .liealg import LieAlgebraSpec, SigmaAction, sigma_adapted_basis

Vec = Tuple[int, ...]

DEFAULT_BUDGET = 10 ** 6


class InsufficientPrecision(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    env = os.environ.get("PROPLIE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class FiniteQuotient:
    """Gamma/Gamma_{k+1}: coordinate tuples mod p^k under the CH law reduced mod p^k."""

    def __init__(self, L: LieAlgebraSpec, k: int, budget: Optional[int] = None):
        if k < 1:
            raise ValueError("level must be at least 1")
        if k > L.N:
            raise InsufficientPrecision(f"level {k} exceeds the algebra precision {L.N}")
        self.L = L
        self.k = k
        self.p = L.p
        self.d = L.d
        self.mod = L.p ** k
        self.Lk = L if k == L.N else L.with_precision(k)
        self._ev = evaluator(self.Lk)
        self.budget = default_budget() if budget is None else budget

    @property
    def log_order(self) -> int:
        return self.k * self.d

    @property
    def order(self) -> int:
        return self.p ** self.log_order

    def element(self, x: Sequence[int]) -> Vec:
        return tuple(int(c) % self.mod for c in x)

    def identity(self) -> Vec:
        return (0,) * self.d

    def generators(self) -> List[Vec]:
        return [self.Lk.unit(i) for i in range(self.d)]

    def mul(self, x: Vec, y: Vec) -> Vec:
        return self._ev.mul(x, y)

    def inv(self, x: Vec) -> Vec:
        return tuple(-c % self.mod for c in x)

    def power(self, x: Vec, e: int) -> Vec:
        # x^e = e*x in Lie coordinates
        return tuple(e * c % self.mod for c in x)

    def comm(self, x: Vec, y: Vec) -> Vec:
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def conj(self, h: Vec, g: Vec) -> Vec:
        """g^-1 h g."""
        return self.mul(self.mul(self.inv(g), h), g)

    def sigma(self, s: SigmaAction, x: Vec) -> Vec:
        return tuple(sum(a * b for a, b in zip(row, x)) % self.mod for row in s.matrix)

    def elements(self):
        if self.order > self.budget:
            raise BudgetExceeded(f"|Q| = {self.order} exceeds budget {self.budget}")
        for t in product(range(self.mod), repeat=self.d):
            yield t

    def nilpotency_class(self) -> int:
        """Length of the lower central series, computed with the explicit engine."""
        current = Subgroup.whole(self)
        c = 0
        while current.log_order > 0:
            gens = [self.comm(h, g) for h in current.gens for g in self.generators()]
            current = normal_closure(self, gens, mode="explicit")
            c += 1
        return c

    @cached_property
    def baer(self) -> "BaerModel":
        if self.k != 2:
            raise ValueError("the Baer model is only used at level 2")
        return BaerModel(self)


def quotient(L: LieAlgebraSpec, k: int, budget: Optional[int] = None) -> FiniteQuotient:
    return FiniteQuotient(L, k, budget)


class BaerModel:
    """Level-2 quotient in Baer coordinates: u * v = u + v + (1/2) w(u, v), w bilinear.

    With second-kind exponents a, the law is a + b + g(a, b) where
    g(a, b) = sum_{i>j} a_i b_j [e_i, e_j]; then u = a - g(a, a)/2 gives the Baer form with
    w(u, v) = g(u, v) - g(v, u), the group commutator.
    """

    def __init__(self, Q: FiniteQuotient):
        self.Q = Q
        p, d, mod = Q.p, Q.d, Q.mod
        self.half = pow(2, -1, mod)
        units = Q.generators()
        self.C = [[Q.comm(units[i], units[j]) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                assert all(c % p == 0 for c in self.C[i][j]), "commutator outside the Frattini layer"

    def gamma(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        d, mod, p = self.Q.d, self.Q.mod, self.Q.p
        out = [0] * d
        for i in range(d):
            if a[i] % p:
                for j in range(i):
                    if b[j] % p:
                        f = a[i] * b[j]
                        out = [x + f * c for x, c in zip(out, self.C[i][j])]
        return tuple(x % mod for x in out)

    def omega(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        g1, g2 = self.gamma(u, v), self.gamma(v, u)
        return tuple((x - y) % self.Q.mod for x, y in zip(g1, g2))

    def baer_mul(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        w = self.omega(u, v)
        return tuple((a + b + self.half * c) % self.Q.mod for a, b, c in zip(u, v, w))

    def to_baer(self, x: Sequence[int]) -> Vec:
        Q = self.Q
        a = to_second_kind(GroupElement(Q.Lk, Q.element(x)))
        g = self.gamma(a, a)
        return tuple((ai - self.half * gi) % Q.mod for ai, gi in zip(a, g))

    def from_baer(self, u: Sequence[int]) -> Vec:
        Q = self.Q
        g = self.gamma(u, u)
        a = tuple((ui + self.half * gi) % Q.mod for ui, gi in zip(u, g))
        return from_second_kind(Q.Lk, a).coords

    def sigma_matrix(self, s: SigmaAction) -> List[List[int]]:
        """sigma in Baer coordinates; automorphisms are additive there."""
        Q = self.Q
        cols = []
        for i in range(Q.d):
            e = tuple(int(j == i) for j in range(Q.d))
            cols.append(self.to_baer(Q.sigma(s, self.from_baer(e))))
        return [[cols[j][i] for j in range(Q.d)] for i in range(Q.d)]


@dataclass
class Subgroup:
    """A subgroup of a FiniteQuotient, either as an element set or a Baer submodule."""

    Q: FiniteQuotient = field(repr=False)
    mode: str
    gens: List[Vec]  # Lie coordinates (explicit) or Baer coordinates (class2)
    elements: Optional[FrozenSet[Vec]] = field(default=None, repr=False)
    module: Optional[Submodule] = None

    @classmethod
    def whole(cls, Q: FiniteQuotient, mode: str = "explicit") -> "Subgroup":
        if mode == "class2":
            return cls(Q, mode, [tuple(int(i == j) for j in range(Q.d)) for i in range(Q.d)],
                       module=Submodule.full(Q.p, 2, Q.d))
        return subgroup_closure(Q, Q.generators(), mode="explicit")

    @property
    def log_order(self) -> int:
        if self.mode == "class2":
            return self.module.log_order()
        n, e = len(self.elements), 0
        while n > 1:
            n //= self.Q.p
            e += 1
        return e

    @property
    def order(self) -> int:
        return self.Q.p ** self.log_order

    def contains(self, x: Vec) -> bool:
        """Membership of an element given in Lie coordinates."""
        if self.mode == "class2":
            return self.module.contains(self.Q.baer.to_baer(x))
        return self.Q.element(x) in self.elements

    def lie_generators(self) -> List[Vec]:
        if self.mode == "class2":
            return [self.Q.baer.from_baer(g) for g in self.gens]
        return list(self.gens)


def _resolve_mode(Q: FiniteQuotient, mode: str) -> str:
    if mode == "auto":
        return "class2" if Q.k == 2 else "explicit"
    if mode == "class2" and Q.k != 2:
        raise ValueError("class2 mode needs level 2")
    if mode not in ("class2", "explicit"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def _explicit_closure(Q: FiniteQuotient, gens: List[Vec], conjugators: Sequence[Vec] = (),
                      start: Optional[FrozenSet[Vec]] = None) -> Tuple[FrozenSet[Vec], List[Vec]]:
    """Orbit closure under right multiplication by gens; with conjugators, repeat until normalized."""
    gens = [Q.element(g) for g in gens if any(c % Q.mod for c in g)]
    seen = set(start) if start else {Q.identity()}
    while True:
        queue = list(seen)
        while queue:
            h = queue.pop()
            for g in gens:
                x = Q.mul(h, g)
                if x not in seen:
                    seen.add(x)
                    if len(seen) > Q.budget:
                        raise BudgetExceeded(f"closure exceeds budget {Q.budget}")
                    queue.append(x)
        if not conjugators:
            break
        fresh = []
        for g in gens:
            for c in conjugators:
                y = Q.conj(g, c)
                if y not in seen and y not in fresh:
                    fresh.append(y)
        if not fresh:
            break
        gens.extend(fresh)
    return frozenset(seen), gens


def _trim(Q: FiniteQuotient, gens: List[Vec]) -> List[Vec]:
    """Drop generators already in the closure of the earlier ones."""
    kept: List[Vec] = []
    current: FrozenSet[Vec] = frozenset({Q.identity()})
    for g in gens:
        if g not in current:
            kept.append(g)
            current, _ = _explicit_closure(Q, kept, start=current)
    return kept


def _class2_closure(Q: FiniteQuotient, gens: List[Vec], normal: bool) -> Tuple[Submodule, List[Vec]]:
    B = Q.baer
    M = Submodule.span(Q.p, 2, Q.d, gens)
    units = [tuple(int(i == j) for j in range(Q.d)) for i in range(Q.d)]
    while True:
        rows = M.generators()
        partners = units if normal else rows
        extra = [B.omega(a, b) for a in rows for b in partners]
        M2 = M.extend(extra)
        if M2.rows == M.rows:
            return M, rows
        M = M2


def subgroup_closure(Q: FiniteQuotient, gens: Sequence[Sequence[int]], mode: str = "auto") -> Subgroup:
    """Smallest subgroup containing gens (given in Lie coordinates)."""
    mode = _resolve_mode(Q, mode)
    gens = [Q.element(g) for g in gens]
    if mode == "class2":
        M, rows = _class2_closure(Q, [Q.baer.to_baer(g) for g in gens], normal=False)
        return Subgroup(Q, mode, rows, module=M)
    elems, used = _explicit_closure(Q, gens)
    return Subgroup(Q, mode, _trim(Q, used), elements=elems)


def normal_closure(Q: FiniteQuotient, gens: Sequence[Sequence[int]], mode: str = "auto") -> Subgroup:
    mode = _resolve_mode(Q, mode)
    gens = [Q.element(g) for g in gens]
    if mode == "class2":
        M, rows = _class2_closure(Q, [Q.baer.to_baer(g) for g in gens], normal=True)
        return Subgroup(Q, mode, rows, module=M)
    elems, used = _explicit_closure(Q, gens, conjugators=Q.generators())
    return Subgroup(Q, mode, _trim(Q, used), elements=elems)


def frattini(Q: FiniteQuotient, H: Subgroup) -> Subgroup:
    """H^p [H, H]."""
    if H.mode == "class2":
        B = Q.baer
        rows = H.module.generators()
        gens = [tuple(Q.p * c % Q.mod for c in r) for r in rows]
        gens += [B.omega(a, b) for a in rows for b in rows]
        M = Submodule.span(Q.p, 2, Q.d, gens)
        return Subgroup(Q, "class2", M.generators(), module=M)
    hg = H.gens
    gens = [Q.power(h, Q.p) for h in hg] + [Q.comm(a, b) for a in hg for b in hg]
    elems, used = _explicit_closure(Q, gens, conjugators=hg)
    return Subgroup(Q, "explicit", _trim(Q, used), elements=elems)


def _join_normal(Q: FiniteQuotient, A: Subgroup, extra_lie: Sequence[Vec]) -> Subgroup:
    """Normal closure of A together with extra elements (Lie coordinates)."""
    if A.mode == "class2":
        gens = A.module.generators() + [Q.baer.to_baer(x) for x in extra_lie]
        M, rows = _class2_closure(Q, gens, normal=True)
        return Subgroup(Q, "class2", rows, module=M)
    elems, used = _explicit_closure(Q, list(A.gens) + list(extra_lie), conjugators=Q.generators())
    return Subgroup(Q, "explicit", used, elements=elems)


def commutator_with_quotient(Q: FiniteQuotient, H: Subgroup) -> List[Vec]:
    """Generators [h, e_j] of [H, Q], in Lie coordinates."""
    if H.mode == "class2":
        B = Q.baer
        units = [tuple(int(i == j) for j in range(Q.d)) for i in range(Q.d)]
        return [B.from_baer(B.omega(h, e)) for h in H.gens for e in units]
    return [Q.comm(h, e) for h in H.gens for e in Q.generators()]


# --- the fixed-point data --------------------------------------------------------------------

@dataclass
class GammaSigmaData:
    level: int
    mode: str
    r: int
    d: int
    fixed_generators: List[Vec]
    circ_log_order: int
    gamma_log_order: int
    frattini_log_order: int
    G_log_order: int
    G_abelian: bool
    G_invariants: Optional[List[int]]
    dp_gamma_sigma: int
    equals_circ: bool
    witness: Optional[Dict[str, list]]
    sigma_fpf_on_G: bool
    p: int

    @property
    def dp_G(self) -> Optional[int]:
        return len(self.G_invariants) if self.G_invariants is not None else None

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "mode": self.mode,
            "type": [self.r, self.d - self.r],
            "G": {"order": self.p ** self.G_log_order, "abelian": self.G_abelian,
                  "invariants": self.G_invariants},
            "dp_gamma_sigma": self.dp_gamma_sigma,
            "equals_circ": self.equals_circ,
            "witness": self.witness,
            "sigma_fpf_on_G": self.sigma_fpf_on_G,
            "fixed_generators": [list(v) for v in self.fixed_generators],
        }


def _cosets(Q: FiniteQuotient, N: Subgroup) -> List[Vec]:
    """Representatives of Q/N by breadth-first search over generators (explicit engine)."""
    reps = [Q.identity()]
    queue = [Q.identity()]
    target = Q.log_order - N.log_order
    while queue:
        r = queue.pop(0)
        for g in Q.generators():
            c = Q.mul(r, g)
            if not any(Q.mul(Q.inv(s), c) in N.elements for s in reps):
                reps.append(c)
                queue.append(c)
                if len(reps) > Q.budget:
                    raise BudgetExceeded("too many cosets")
    assert len(reps) == Q.p ** target
    return reps


def _abelian_invariants_explicit(Q: FiniteQuotient, N: Subgroup, reps: List[Vec]) -> List[int]:
    p = Q.p
    counts = {}
    for g in reps:
        i = 0
        x = g
        while x not in N.elements:
            x = Q.power(x, p)
            i += 1
        counts[i] = counts.get(i, 0) + 1
    # number of elements of order dividing p^i is p^{sum_j min(a_j, i)}
    max_i = max(counts)
    logs = []
    running = 0
    for i in range(max_i + 1):
        running += counts.get(i, 0)
        n, e = running, 0
        while n > 1:
            n //= p
            e += 1
        logs.append(e)
    # logs[i] - logs[i-1] = number of cyclic factors of order >= p^i
    ge = [logs[i] - logs[i - 1] for i in range(1, max_i + 1)]
    inv = []
    for i in range(1, max_i + 1):
        nxt = ge[i] if i < max_i else 0
        inv += [p ** i] * (ge[i - 1] - nxt)
    return sorted(inv)


def gamma_sigma_data(L: LieAlgebraSpec, sigma: SigmaAction, k: int, mode: str = "auto",
                     budget: Optional[int] = None) -> GammaSigmaData:
    Q = FiniteQuotient(L, k, budget)
    mode = _resolve_mode(Q, mode)
    basis = sigma_adapted_basis(L, sigma)
    fixed = [Q.element(v) for v in basis.fixed()]
    circ = subgroup_closure(Q, fixed, mode)
    H = normal_closure(Q, fixed, mode)
    Phi = frattini(Q, H)
    dp = H.log_order - Phi.log_order
    equals_circ = circ.log_order == H.log_order
    G_log = Q.log_order - H.log_order

    witness = None
    if mode == "class2":
        B = Q.baer
        units = [tuple(int(i == j) for j in range(Q.d)) for i in range(Q.d)]
        for h in H.gens:
            for j, e in enumerate(units):
                w = B.omega(h, e)
                if not Phi.module.contains(w):
                    witness = {"g": list(Q.generators()[j]), "v": list(B.from_baer(h)),
                               "commutator": list(B.from_baer(w))}
                    break
            if witness:
                break
        G_abelian = all(H.module.contains(B.omega(a, b)) for a in units for b in units)
        G_inv = H.module.quotient_invariants() if G_abelian else None
        S = B.sigma_matrix(sigma)
        moved = [[(S[i][j] - int(i == j)) % Q.mod for i in range(Q.d)] for j in range(Q.d)]
        fpf = H.module.extend(moved).log_order() == Q.log_order
    else:
        for h in H.gens:
            for g in Q.generators():
                c = Q.comm(h, g)
                if c not in Phi.elements:
                    witness = {"g": list(g), "v": list(h), "commutator": list(c)}
                    break
            if witness:
                break
        gens = Q.generators()
        G_abelian = all(Q.comm(a, b) in H.elements for a in gens for b in gens)
        reps = _cosets(Q, H)
        G_inv = _abelian_invariants_explicit(Q, H, reps) if G_abelian else None
        fpf = all(Q.mul(Q.inv(g), Q.sigma(sigma, g)) not in H.elements for g in reps[1:])

    return GammaSigmaData(k, mode, basis.r, L.d, fixed, circ.log_order, H.log_order, Phi.log_order,
                          G_log, G_abelian, G_inv, dp, equals_circ, witness, fpf, L.p)


@dataclass
class FpmfReport:
    verdict: str  # "FPMF" | "not-FPMF" | "undecided-at-level"
    level: int
    data: Optional[GammaSigmaData]
    history: List[dict]
    note: str = ""

    def to_json(self) -> dict:
        d = self.data
        out = {
            "verdict": self.verdict,
            "level": self.level,
            "G": ({"order": d.p ** d.G_log_order, "invariants": d.G_invariants} if d else None),
            "dp_gamma_sigma": d.dp_gamma_sigma if d else None,
            "equals_circ": d.equals_circ if d else None,
            "witness": d.witness if d else None,
            "levels": self.history,
        }
        if self.note:
            out["note"] = self.note
        return out


def fpmf_check(L: LieAlgebraSpec, sigma: SigmaAction, k_max: int, mode: str = "auto",
               budget: Optional[int] = None) -> FpmfReport:
    """FPMF needs a witness at some level; not-FPMF needs two consecutive agreeing levels with d_p = r."""
    if k_max > L.N:
        raise InsufficientPrecision(f"level {k_max} exceeds the algebra precision {L.N}")
    history: List[dict] = []
    prev: Optional[GammaSigmaData] = None
    data: Optional[GammaSigmaData] = None
    for k in range(2, k_max + 1):
        try:
            data = gamma_sigma_data(L, sigma, k, mode if k == 2 else ("explicit" if mode == "class2" else mode),
                                    budget)
        except BudgetExceeded as exc:
            return FpmfReport("undecided-at-level", k, prev, history, note=f"budget exhausted: {exc}")
        history.append({"level": k, "dp_gamma_sigma": data.dp_gamma_sigma, "equals_circ": data.equals_circ,
                        "action_trivial": data.witness is None})
        if data.witness is not None:
            return FpmfReport("FPMF", k, data, history)
        if (prev is not None and prev.dp_gamma_sigma == data.dp_gamma_sigma
                and prev.equals_circ == data.equals_circ and data.dp_gamma_sigma == data.r):
            return FpmfReport("not-FPMF", k, data, history,
                              note="trivial action stable over two consecutive levels with d_p = r")
        prev = data
    return FpmfReport("undecided-at-level", k_max, data, history)


def quotient_rank_identity(L: LieAlgebraSpec, sigma: SigmaAction, k: int, mode: str = "auto",
                           budget: Optional[int] = None) -> dict:
    """Coinvariants of the Frattini section: dimension r, spanned by fixed generators, sigma-trivial."""
    Q = FiniteQuotient(L, k, budget)
    mode = _resolve_mode(Q, mode)
    basis = sigma_adapted_basis(L, sigma)
    fixed = [Q.element(v) for v in basis.fixed()]
    r = basis.r
    H = normal_closure(Q, fixed, mode)
    Phi = frattini(Q, H)
    dp = H.log_order - Phi.log_order
    # kernel of V -> V_G is generated by Phi(H) and [H, Q]
    K = _join_normal(Q, Phi, commutator_with_quotient(Q, H))
    coinv = H.log_order - K.log_order
    spanned = _join_normal(Q, K, fixed).log_order - K.log_order
    lie_gens = H.lie_generators()
    moved = [Q.mul(Q.inv(h), Q.sigma(sigma, h)) for h in lie_gens]
    sigma_trivial = all(K.contains(m) for m in moved)
    clauses = {
        "coinvariant_dim_equals_r": coinv == r and spanned == r,
        "sigma_trivial_on_coinvariants": sigma_trivial,
        "dp_at_least_r": dp >= r,
    }
    return {"pass": all(clauses.values()), "clauses": clauses, "r": r, "coinvariant_dim": coinv,
            "fixed_span_dim": spanned, "dp_gamma_sigma": dp, "level": k, "mode": mode}


def frattini_section_jordan_type(L: LieAlgebraSpec, sigma: SigmaAction, k: int, g: Sequence[int],
                                 budget: Optional[int] = None) -> List[int]:
    """Jordan block sizes of conjugation by g on Gamma_sigma/Phi(Gamma_sigma) at level k."""
    Q = FiniteQuotient(L, k, budget)
    basis = sigma_adapted_basis(L, sigma)
    fixed = [Q.element(v) for v in basis.fixed()]
    H = normal_closure(Q, fixed, "explicit")
    Phi = frattini(Q, H)
    p = Q.p
    # basis of V = H/Phi(H) from the generators of H
    vbasis: List[Vec] = []
    span = Phi
    for h in H.gens:
        if h not in span.elements:
            vbasis.append(h)
            elems, used = _explicit_closure(Q, list(span.gens) + [h], conjugators=H.gens)
            span = Subgroup(Q, "explicit", used, elements=elems)
    m = len(vbasis)
    g = Q.element(g)

    def coords(x: Vec) -> List[int]:
        for c in product(range(p), repeat=m):
            y = Q.identity()
            for ci, b in zip(c, vbasis):
                y = Q.mul(y, Q.power(b, ci))
            if Q.mul(Q.inv(y), x) in Phi.elements:
                return list(c)
        raise AssertionError("element outside H")

    A = [coords(Q.conj(b, g)) for b in vbasis]  # row i = image of basis i
    return jordan_type_unipotent([[A[j][i] for j in range(m)] for i in range(m)], p)


def jordan_type_unipotent(A: Sequence[Sequence[int]], p: int) -> List[int]:
    """Block sizes of a unipotent matrix over F_p from the ranks of (A - I)^i."""
    n = len(A)
    if n == 0:
        return []
    Nm = [[(A[i][j] - int(i == j)) % p for j in range(n)] for i in range(n)]
    ranks = [n]
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(n):
        P = [[sum(P[i][t] * Nm[t][j] for t in range(n)) % p for j in range(n)] for i in range(n)]
        ranks.append(mat_rank_mod_p(P, p))
        if ranks[-1] == 0:
            break
    ranks += [0] * 2
    sizes = []
    for i in range(1, len(ranks) - 1):
        at_least_i = ranks[i - 1] - ranks[i]
        at_least_next = ranks[i] - ranks[i + 1]
        sizes += [i] * (at_least_i - at_least_next)
    return sorted(sizes, reverse=True)
