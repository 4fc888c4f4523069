"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run alone with `python3 tests/test_acceptance.py` or through pytest.
"""

import random
import time
from fractions import Fraction

import pytest

from proplie import bounds as bd
from proplie.catalog import make_dirprod, make_heisenberg, make_semidirect, make_sl, standard_entries
from proplie.chgroup import GroupElement, bch_mul, from_second_kind, grp_inv, sigma_apply, to_second_kind
from proplie.finitep import fpmf_check, frattini, gamma_sigma_data, quotient, subgroup_closure
from proplie.liealg import is_fab, named_sigma, sigma_adapted_basis, sigma_type
from proplie.modrep import (DihedralModule, GModule, block_diag, change_basis, dihedral_free_rank,
                            dihedral_lower_bound, dirichlet_dimension, dirichlet_module, free_rank_bruteforce,
                            norm_rank_t, s3_indecomposables)

FAST_LIMIT_S = 5.0
SLOW_LIMIT_S = 60.0
BACKEND_PAIRS = 100
GROUP_LAW_CASES = 1000
S3_MODULES = 200
DIRICHLET_CASES = 100


def _line(n, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}"


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print("\n" + _line(n, ok, detail))
        assert ok, detail
    return emit


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def crit_1():
    def run():
        L = make_sl(3, 2).algebra
        s = named_sigma(L, "sigma_D")
        rep = fpmf_check(L, s, 2)
        return L, s, rep, quotient(L, 2).order
    (L, s, rep, qorder), dt = timed(run)
    d = rep.data
    fixed = list(sigma_adapted_basis(L, s).fixed())
    ok = (is_fab(L) and sigma_type(L, s).pair == (1, 2) and fixed == [L.unit(2)] and d.G_invariants == [3, 3]
          and rep.verdict == "FPMF" and d.witness is not None and rep.level == 2 and qorder == 729
          and dt < FAST_LIMIT_S)
    return ok, f"sl2 sigma_D: G={d.G_invariants} verdict={rep.verdict} |Q|={qorder} in {dt:.2f}s"


def crit_2():
    def run():
        L = make_sl(3, 2).algebra
        return fpmf_check(L, named_sigma(L, "sigma_eps"), 2)
    rep, dt = timed(run)
    ok = rep.verdict == "FPMF" and dt < FAST_LIMIT_S
    return ok, f"sl2 sigma_eps: verdict={rep.verdict} in {dt:.2f}s"


def crit_3():
    def run():
        L = make_heisenberg(3).algebra
        s = named_sigma(L, "sigma_A")
        rep = fpmf_check(L, s, 2)
        Q = quotient(L, 2)
        circ = subgroup_closure(Q, [Q.element(v) for v in sigma_adapted_basis(L, s).fixed()])
        return L, rep, circ.log_order - frattini(Q, circ).log_order
    (L, rep, circ_rank), dt = timed(run)
    d = rep.data
    ok = (not is_fab(L) and circ_rank == 2 and d.G_invariants == [3] and rep.verdict == "FPMF"
          and d.equals_circ is False and dt < FAST_LIMIT_S)
    return ok, (f"heisenberg: fab={is_fab(L)} rank(circ)={circ_rank} G={d.G_invariants} "
                f"equals_circ={d.equals_circ} verdict={rep.verdict} in {dt:.2f}s")


def crit_4():
    def run():
        L = make_semidirect(3, 1).algebra
        return fpmf_check(L, named_sigma(L, "sigma"), 2)
    rep, dt = timed(run)
    d = rep.data
    ok = d.G_invariants == [3] and d.dp_gamma_sigma == 2 and rep.verdict == "FPMF" and dt < FAST_LIMIT_S
    return ok, f"semidirect: G={d.G_invariants} dp={d.dp_gamma_sigma} verdict={rep.verdict} in {dt:.2f}s"


def crit_5():
    def run():
        L = make_dirprod(3).algebra
        return fpmf_check(L, named_sigma(L, "sigma"), 3)
    rep, dt = timed(run)
    levels = [h["level"] for h in rep.history]
    ok = rep.verdict == "not-FPMF" and levels == [2, 3] and dt < FAST_LIMIT_S
    return ok, f"dirprod: verdict={rep.verdict} levels={levels} in {dt:.2f}s"


def crit_6():
    def run():
        L = make_sl(3, 3).algebra
        return gamma_sigma_data(L, named_sigma(L, "sigma_A1"), 2, mode="class2")
    d, dt = timed(run)
    ok = d.dp_G == 4 and d.G_abelian and d.G_invariants == [3] * 4 and dt < SLOW_LIMIT_S
    return ok, f"sl3 sigma_A1: G={d.G_invariants} mode={d.mode} in {dt:.2f}s"


def crit_7():
    rng = random.Random(7)
    mismatches = 0
    for L in (make_sl(3, 2).algebra, make_heisenberg(3).algebra):
        mod = L.p ** L.N
        for _ in range(BACKEND_PAIRS):
            x = GroupElement.make(L, [rng.randrange(mod) for _ in range(L.d)])
            y = GroupElement.make(L, [rng.randrange(mod) for _ in range(L.d)])
            mismatches += bch_mul(x, y) != bch_mul(x, y, backend="matrix")
    return mismatches == 0, f"series vs matrix backend: {mismatches} mismatches on {2 * BACKEND_PAIRS} pairs mod 3^4"


def _group_law_failures(L, rng, cases):
    mod = L.p ** L.N
    sigmas = [named_sigma(L, a.name) for a in L.automorphisms]
    e = GroupElement.identity(L)
    rand = lambda: GroupElement.make(L, [rng.randrange(mod) for _ in range(L.d)])
    fails = 0
    for i in range(cases):
        x, y, z = rand(), rand(), rand()
        s = sigmas[i % len(sigmas)]
        ok = (bch_mul(bch_mul(x, y), z) == bch_mul(x, bch_mul(y, z))
              and bch_mul(x, e) == x == bch_mul(e, x)
              and bch_mul(x, grp_inv(x)) == e
              and sigma_apply(s, bch_mul(x, y)) == bch_mul(sigma_apply(s, x), sigma_apply(s, y))
              and from_second_kind(L, to_second_kind(x)) == x)
        fails += not ok
    return fails


def crit_8():
    rng = random.Random(8)
    results = {e.algebra.name: _group_law_failures(e.algebra, rng, GROUP_LAW_CASES) for e in standard_entries()}
    total = sum(results.values())
    return total == 0, f"group law: {total} failures over {GROUP_LAW_CASES} cases each for {sorted(results)}"


def _jordan(n):
    return tuple(tuple(1 if j in (i, i + 1) else 0 for j in range(n)) for i in range(n))


def _partitions(n, largest=3):
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def crit_9():
    # Jordan blocks have size at most 3; partitions of 1..6 into parts <= 3 number 1+2+3+4+5+7
    checked = mismatches = 0
    for dim in range(1, 7):
        for blocks in _partitions(dim):
            M = GModule(3, (block_diag([_jordan(b) for b in blocks]),), (3,))
            t = norm_rank_t(M)
            mismatches += t != free_rank_bruteforce(M) or t != blocks.count(3)
            checked += 1
    rng = random.Random(9)
    ind = s3_indecomposables()
    names = sorted(ind)
    violations = made = 0
    while made < S3_MODULES:
        chosen = [rng.choice(names) for _ in range(rng.randrange(1, 6))]
        rho = block_diag([ind[n][0] for n in chosen])
        if len(rho) > 12:
            continue
        tau = block_diag([ind[n][1] for n in chosen])
        n = len(rho)
        while True:
            P = [[rng.randrange(3) for _ in range(n)] for _ in range(n)]
            try:
                M = DihedralModule(3, change_basis(3, rho, P), change_basis(3, tau, P))
                break
            except ValueError:
                continue
        exact = dihedral_free_rank(M)
        expected = min(chosen.count("P+"), chosen.count("P-"))
        violations += dihedral_lower_bound(M) > exact or exact != expected
        made += 1
    ok = mismatches == 0 and checked == 22 and violations == 0
    return ok, (f"F3[Z/3]: {mismatches} mismatches over {checked} modules; "
                f"F3[S3]: {violations} violations over {made} modules")


def crit_10():
    checks = {
        "m_ell(2)=1": bd.m_ell(2) == 1,
        "m_ell(3)=2": bd.m_ell(3) == 2,
        "n_ell(3)=2": bd.n_ell(3) == 2,
        "GS(5,0,1,0)": bd.golod_shafarevich_infinite(5, 0, 1, 0) is True,
        "real quadratic t>=|T|": all(
            bd.unit_rank_bound(bd.BoundsInput(order_G=2, r1=1, d_inf=1, T=T)).t_lower >= T for T in range(20)),
        "cyclo dp_C=2": all(bd.cyclo_n0(s, 2, 162, 2) == bd.cyclo_closed_form(s) for s in range(1, 11)),
    }
    rep = bd.cyclo_discrepancy_report(list(range(1, 11)))
    off = [r["s"] for r in rep["rows"] if r["dp_C=3"] != r["closed_form"]]
    checks["dp_C=3 discrepancy reported"] = rep["consistent_dp_C"] == [2] and len(off) > 0
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"bounds: failed={bad}; dp_C=3 differs at s={off}"


def crit_11():
    rng = random.Random(11)
    contexts = [(2, 3), (2, 5), (2, 7), (3, 7), (3, 13), (5, 11)]
    fails = 0
    for _ in range(DIRICHLET_CASES):
        ell, p = rng.choice(contexts)
        D = [rng.choice([1, ell]) for _ in range(rng.randrange(1, 5))]
        T = rng.randrange(6)
        mu = rng.random() < 0.5
        v = dirichlet_module(ell, p, D, T, mu)
        # each place v contributes the permutation module on Delta/D_v; the unit character is removed once
        oracle = sum(ell // o for o in D) + ell * T - 1 + int(mu)
        if ell == 2:
            d_inf, r_inf = D.count(1), D.count(2)
            oracle_q = ell * (d_inf + Fraction(r_inf, 2) + T) - 1 + int(mu)
            fails += oracle_q != oracle
        fails += v.dim != oracle or dirichlet_dimension(ell, D, T, mu) != oracle
    return fails == 0, f"dirichlet dimension identity: {fails} failures over {DIRICHLET_CASES} inputs"


def crit_12():
    runs = []
    for e in standard_entries():
        L = e.algebra
        levels = [2] if L.d > 3 else [2, 3]
        for a in L.automorphisms:
            for k in levels:
                d = gamma_sigma_data(L, named_sigma(L, a.name), k)
                runs.append((L.name, a.name, k, d.sigma_fpf_on_G))
    bad = [r[:3] for r in runs if not r[3]]
    return not bad, f"sigma fixed-point-free on G: {len(runs) - len(bad)}/{len(runs)} runs; bad={bad}"


CRITERIA = [crit_1, crit_2, crit_3, crit_4, crit_5, crit_6, crit_7, crit_8, crit_9, crit_10, crit_11, crit_12]


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, report):
    ok, detail = CRITERIA[n - 1]()
    report(n, ok, detail)


if __name__ == "__main__":
    failed = 0
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failed += not ok
        print(_line(n, ok, detail), flush=True)
    raise SystemExit(1 if failed else 0)
