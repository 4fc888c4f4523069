"""Characters of cyclic groups over F_p, unit-module synthesis, and free ranks of group-algebra modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .lattice import mat_rank_mod_p, nullspace_mod_p, solve
from .liealg import primitive_root_of_order
from .padic import is_prime

Matrix = Tuple[Tuple[int, ...], ...]


class InconsistentInput(ValueError):
    pass


class RelationViolation(ValueError):
    pass


def _check_cyclic(p: int, ell: int) -> None:
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if ell < 1 or (p - 1) % ell:
        raise ValueError(f"ell = {ell} must divide p - 1 = {p - 1}")


@dataclass(frozen=True)
class CharVector:
    """Multiplicities of the characters s -> w^j (j = 0..ell-1) of a cyclic group of order ell."""

    p: int
    ell: int
    mults: Tuple[int, ...]

    def __post_init__(self):
        _check_cyclic(self.p, self.ell)
        if len(self.mults) != self.ell or any(m < 0 for m in self.mults):
            raise ValueError("need ell non-negative multiplicities")
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))

    @classmethod
    def regular(cls, p: int, ell: int) -> "CharVector":
        return cls(p, ell, (1,) * ell)

    @classmethod
    def unit(cls, p: int, ell: int, j: int) -> "CharVector":
        return cls(p, ell, tuple(int(i == j % ell) for i in range(ell)))

    @property
    def dim(self) -> int:
        return sum(self.mults)

    @property
    def root(self) -> int:
        return primitive_root_of_order(self.ell, self.p)

    def __add__(self, other: "CharVector") -> "CharVector":
        if (self.p, self.ell) != (other.p, other.ell):
            raise ValueError("incompatible characters")
        return CharVector(self.p, self.ell, tuple(a + b for a, b in zip(self.mults, other.mults)))

    def scale(self, n: int) -> "CharVector":
        return CharVector(self.p, self.ell, tuple(n * a for a in self.mults))

    def to_json(self) -> dict:
        return {"p": self.p, "ell": self.ell, "mults": list(self.mults)}

    @classmethod
    def from_json(cls, data: dict) -> "CharVector":
        return cls(int(data["p"]), int(data["ell"]), tuple(data["mults"]))


def r_min_gens(v: CharVector) -> int:
    """Minimal number of generators: each cyclic submodule holds each character at most once."""
    return max(v.mults)


def char_dual(v: CharVector) -> CharVector:
    return CharVector(v.p, v.ell, tuple(v.mults[-j % v.ell] for j in range(v.ell)))


def dirichlet_module(ell: int, p: int, decomposition_subgroups: Sequence[int], T: int,
                     mu_p_in_K: bool = False, chi_p_index: int = 1) -> CharVector:
    """Character of O_K^T / p for a cyclic degree-ell extension.

    Each archimedean place contributes Ind_D F_p, where D is given by its order (1 or ell):
    a trivial D induces the regular character, the full group induces the trivial one.
    """
    _check_cyclic(p, ell)
    if T < 0:
        raise InconsistentInput("|T| must be non-negative")
    total = [0] * ell
    for order in decomposition_subgroups:
        if order == 1:
            total = [t + 1 for t in total]
        elif order == ell:
            total[0] += 1
        else:
            raise InconsistentInput(f"decomposition group order {order} is not 1 or {ell}")
    total = [t + T for t in total]
    if mu_p_in_K:
        total[chi_p_index % ell] += 1
    total[0] -= 1
    if total[0] < 0:
        raise InconsistentInput("no trivial character left to remove")
    return CharVector(p, ell, tuple(total))


def dirichlet_dimension(ell: int, decomposition_subgroups: Sequence[int], T: int, mu_p_in_K: bool) -> int:
    """|Delta| (d_inf + r_inf/2 + |T|) - 1 + [mu_p], written with integers."""
    d_inf = sum(1 for o in decomposition_subgroups if o == 1)
    full = sum(1 for o in decomposition_subgroups if o == ell and ell != 1)
    # r_inf / 2 = full / ell, so |Delta| * r_inf / 2 = full
    return ell * (d_inf + T) + full - 1 + int(mu_p_in_K)


# --- modules over group algebras ------------------------------------------------------------

def _mm(a, b, p):
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % p for c in zip(*b)) for r in a)


def _eye(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mpow(a, e, p):
    out = _eye(len(a))
    for _ in range(e):
        out = _mm(out, a, p)
    return out


@dataclass(frozen=True)
class GModule:
    """An F_p-space with a group action given by one matrix per group generator.

    For an abelian p-group, `group_invariants` lists the cyclic factor orders and the
    matrices act for the corresponding generators. `group_order` may be set instead for a
    group given only by generators (e.g. a finite quotient).
    """

    p: int
    action: Tuple[Matrix, ...]
    group_invariants: Optional[Tuple[int, ...]] = None
    group_order: Optional[int] = None
    dim: int = field(init=False)

    def __post_init__(self):
        acts = tuple(tuple(tuple(int(x) % self.p for x in r) for r in m) for m in self.action)
        object.__setattr__(self, "action", acts)
        n = len(acts[0]) if acts else 0
        object.__setattr__(self, "dim", n)
        if any(len(m) != n or any(len(r) != n for r in m) for m in acts):
            raise ValueError("action matrices must be square of equal size")
        if self.group_invariants is not None:
            inv = tuple(int(x) for x in self.group_invariants)
            object.__setattr__(self, "group_invariants", inv)
            if len(inv) != len(acts):
                raise RelationViolation("need one matrix per cyclic factor")
            for m, o in zip(acts, inv):
                if _mpow(m, o, self.p) != _eye(n):
                    raise RelationViolation(f"a generator of order {o} does not satisfy g^{o} = 1")
            for a in acts:
                for b in acts:
                    if _mm(a, b, self.p) != _mm(b, a, self.p):
                        raise RelationViolation("generators of an abelian group do not commute")
            order = 1
            for o in inv:
                order *= o
            object.__setattr__(self, "group_order", order)
        elif self.group_order is None:
            raise ValueError("give group_invariants or group_order")

    def image_group(self) -> List[Matrix]:
        """All matrices in the group generated by the action."""
        n = self.dim
        seen = {_eye(n)}
        queue = [_eye(n)]
        while queue:
            g = queue.pop()
            for a in self.action:
                h = _mm(g, a, self.p)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return sorted(seen)

    def norm_matrix(self) -> Matrix:
        """Matrix of N_G = sum of the group elements (zero when the action has a kernel)."""
        n = self.dim
        imgs = self.image_group()
        if self.group_order % len(imgs):
            raise RelationViolation("image larger than the group")
        mult = self.group_order // len(imgs)
        return tuple(tuple(mult * sum(g[i][j] for g in imgs) % self.p for j in range(n)) for i in range(n))

    def fixed_points(self) -> List[List[int]]:
        rows = []
        for a in self.action:
            rows += [[(a[i][j] - int(i == j)) % self.p for j in range(self.dim)] for i in range(self.dim)]
        return nullspace_mod_p(rows, self.dim, self.p)

    def to_json(self) -> dict:
        out = {"p": self.p, "action": [[list(r) for r in m] for m in self.action]}
        if self.group_invariants is not None:
            out["group_invariants"] = list(self.group_invariants)
        else:
            out["group_order"] = self.group_order
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GModule":
        inv = data.get("group_invariants")
        return cls(int(data["p"]), tuple(tuple(tuple(r) for r in m) for m in data["action"]),
                   tuple(inv) if inv is not None else None, data.get("group_order"))


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def norm_rank_t(M: GModule) -> int:
    """Number of free summands over F_p[G] for a p-group G: the rank of the norm element."""
    if not _is_p_power(M.group_order, M.p):
        raise ValueError("norm criterion needs a p-group")
    if M.dim == 0:
        return 0
    return mat_rank_mod_p(M.norm_matrix(), M.p)


def _generated_dim(M: GModule, vectors: Sequence[Sequence[int]], imgs: Sequence[Matrix]) -> int:
    rows = [[sum(g[i][j] * v[j] for j in range(M.dim)) % M.p for i in range(M.dim)] for g in imgs for v in vectors]
    return mat_rank_mod_p(rows, M.p) if rows else 0


def free_rank_bruteforce(M: GModule) -> int:
    """Free rank by greedy search over all vectors.

    Free submodules are direct summands (group algebras are self-injective), and a maximal
    free submodule has complement without free submodules, so greedy extension is exact.
    A submodule generated by t vectors is free iff its dimension is t*|G|.
    """
    imgs = M.image_group()
    if len(imgs) != M.group_order:
        return 0  # a nontrivial kernel leaves no faithful cyclic submodule of full size
    chosen: List[Sequence[int]] = []
    base = 0
    while True:
        for v in product(range(M.p), repeat=M.dim):
            if any(v) and _generated_dim(M, chosen + [v], imgs) == base + M.group_order:
                chosen.append(v)
                base += M.group_order
                break
        else:
            return len(chosen)


def t_lower_bound(dpM: int, order_G: int, r_MG: int) -> int:
    if min(dpM, order_G, r_MG) < 0:
        raise ValueError("inputs must be non-negative")
    return max(0, dpM - (order_G - 1) * r_MG)


# --- Z/p semidirect Z/2 (S_3 when p = 3) -----------------------------------------------------

@dataclass(frozen=True)
class DihedralModule:
    """A module over F_p[Z/p x| Z/2]: rho of order p, tau of order 2, tau rho tau = rho^-1."""

    p: int
    rho: Matrix
    tau: Matrix

    def __post_init__(self):
        p, n = self.p, len(self.rho)
        r = tuple(tuple(x % p for x in row) for row in self.rho)
        s = tuple(tuple(x % p for x in row) for row in self.tau)
        object.__setattr__(self, "rho", r)
        object.__setattr__(self, "tau", s)
        if _mpow(r, p, p) != _eye(n) or _mm(s, s, p) != _eye(n):
            raise RelationViolation("generator orders violated")
        if _mm(_mm(s, r, p), s, p) != _mpow(r, p - 1, p):
            raise RelationViolation("tau rho tau != rho^-1")

    @property
    def dim(self) -> int:
        return len(self.rho)

    @property
    def order(self) -> int:
        return 2 * self.p

    def p_part(self) -> GModule:
        return GModule(self.p, (self.rho,), (self.p,))


def dihedral_free_rank(M: DihedralModule) -> int:
    """Exact t: the norm of the Sylow p-subgroup maps onto the socles of the projective
    summands, and tau splits that image into the two projective indecomposable types."""
    p = M.p
    Nm = M.p_part().norm_matrix()
    n = M.dim
    half = pow(2, -1, p)
    counts = []
    for sign in (1, -1):
        proj = [[half * (int(i == j) + sign * M.tau[i][j]) % p for j in range(n)] for i in range(n)]
        counts.append(mat_rank_mod_p(_mm(proj, Nm, p), p) if n else 0)
    return min(counts)


def dihedral_lower_bound(M: DihedralModule) -> int:
    """t_lower_bound with r(M^G) computed from the tau-eigenspaces of the rho-fixed points."""
    p = M.p
    fixed = M.p_part().fixed_points()
    if not fixed:
        return t_lower_bound(M.dim, M.order, 0)
    dims = []
    for sign in (1, -1):
        rows = [[(M.tau[i][j] - sign * int(i == j)) % p for j in range(M.dim)] for i in range(M.dim)]
        # eigenspace of tau inside the fixed space
        B = [[fixed[c][i] for c in range(len(fixed))] for i in range(M.dim)]
        prod_rows = [[sum(rows[i][k] * B[k][c] for k in range(M.dim)) % p for c in range(len(fixed))]
                     for i in range(M.dim)]
        dims.append(len(fixed) - mat_rank_mod_p(prod_rows, p))
    return t_lower_bound(M.dim, M.order, max(dims))


def _induced_from_tau(p: int, eps: int) -> Tuple[Matrix, Matrix]:
    """Ind from <tau> of the character tau -> eps, on the basis rho^i v."""
    rho = tuple(tuple(int(i == (j + 1) % p) for j in range(p)) for i in range(p))
    tau = tuple(tuple(eps % p if i == (-j) % p else 0 for j in range(p)) for i in range(p))
    return rho, tau


def _restrict(p: int, a: Matrix, basis: Sequence[Sequence[int]]) -> Matrix:
    """Matrix of a on the invariant subspace spanned by basis (columns solved by elimination)."""
    B = [[b[i] for b in basis] for i in range(len(a))]
    cols = []
    for b in basis:
        img = [sum(a[i][j] * b[j] for j in range(len(a))) % p for i in range(len(a))]
        c, _ = solve(B, img, p, 1)
        cols.append(c)
    k = len(basis)
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def s3_indecomposables() -> dict:
    """The six indecomposable F_3[S_3]-modules as (rho, tau) pairs, keyed by name."""
    p = 3
    out = {"triv": (((1,),), ((1,),)), "sign": (((1,),), ((2,),))}
    aug = [[1, 2, 0], [0, 1, 2]]
    for eps, name in ((1, "P+"), (-1, "P-")):
        rho, tau = _induced_from_tau(p, eps)
        out[name] = (rho, tau)
        out["rad" + name] = (_restrict(p, rho, aug), _restrict(p, tau, aug))
    return out


def block_diag(mats: Sequence[Matrix]) -> Matrix:
    n = sum(len(m) for m in mats)
    out = [[0] * n for _ in range(n)]
    o = 0
    for m in mats:
        for i, r in enumerate(m):
            out[o + i][o:o + len(r)] = list(r)
        o += len(m)
    return tuple(tuple(r) for r in out)


def change_basis(p: int, a: Matrix, P: Sequence[Sequence[int]]) -> Matrix:
    """P^-1 a P over F_p."""
    n = len(a)
    aP = _mm(a, P, p)
    cols = [solve([list(r) for r in P], [aP[i][j] for i in range(n)], p, 1)[0] for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
