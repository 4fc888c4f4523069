"""Command-line front end: validate algebras, compute sigma data, evaluate bounds, check catalog facts."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional

from . import bounds as bd
from .catalog import BUILDERS, build, standard_entries
from .finitep import (BudgetExceeded, InsufficientPrecision, default_budget, fpmf_check, gamma_sigma_data,
                      quotient_rank_identity)
from .liealg import (JacobiViolation, LieAlgebraError, LieAlgebraSpec, RealizationMismatch, is_fab, is_powerful,
                     named_sigma, sigma_adapted_basis, sigma_type)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    precision: Optional[int] = None
    level_max: int = 3
    budget: int = 10 ** 6
    seed: int = 0
    fmt: str = "json"
    output: Optional[str] = None

    def __post_init__(self):
        if self.budget < 1:
            raise InputError("budget must be at least 1")
        if self.precision is not None and self.level_max > self.precision:
            raise InputError(f"level {self.level_max} exceeds precision {self.precision}")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, default=_jsonable)
    lines = []
    for k in sorted(report):
        v = report[k]
        text = json.dumps(v, sort_keys=True, default=_jsonable) if isinstance(v, (dict, list)) else str(v)
        lines.append(f"{k}: {text}")
    return "\n".join(lines)


def _load(path: str, cfg: RunConfig) -> LieAlgebraSpec:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    L = LieAlgebraSpec.from_json(data)
    if cfg.precision is not None:
        if cfg.precision > L.N:
            raise InputError(f"--precision {cfg.precision} exceeds the file precision {L.N}")
        L = L.with_precision(cfg.precision)
    return L


def _sigma(L: LieAlgebraSpec, name: str):
    try:
        return named_sigma(L, name)
    except KeyError:
        raise InputError(f"unknown automorphism {name!r}; known: {[a.name for a in L.automorphisms]}") from None


def cmd_validate(args, cfg: RunConfig):
    try:
        L = _load(args.file, cfg)
    except (JacobiViolation, RealizationMismatch) as exc:
        return {"valid": False, "error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    autos = {}
    ok = True
    for a in L.automorphisms:
        try:
            named_sigma(L, a.name)
            autos[a.name] = {"order": a.order, "valid": True}
        except LieAlgebraError as exc:
            ok = False
            autos[a.name] = {"order": a.order, "valid": False, "error": type(exc).__name__, "message": str(exc)}
    report = {"valid": ok, "name": L.name, "p": L.p, "precision": L.N, "dim": L.d, "powerful": is_powerful(L),
              "realization": L.realization is not None, "automorphisms": autos}
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_fab(args, cfg):
    L = _load(args.file, cfg)
    return {"name": L.name, "fab": is_fab(L), "powerful": is_powerful(L)}, EXIT_OK


def cmd_type(args, cfg):
    L = _load(args.file, cfg)
    s = _sigma(L, args.sigma)
    t = sigma_type(L, s)
    B = sigma_adapted_basis(L, s)
    return {"name": L.name, "sigma": args.sigma, "type": list(t.pair), "multiplicities": list(t.multiplicities),
            "fixed": [list(v) for v in B.fixed()]}, EXIT_OK


def cmd_fpmf(args, cfg):
    L = _load(args.file, cfg)
    s = _sigma(L, args.sigma)
    k_max = args.k_max if args.k_max is not None else min(cfg.level_max, L.N)
    if k_max > L.N:
        raise InputError(f"--k-max {k_max} exceeds precision {L.N}")
    rep = fpmf_check(L, s, k_max, budget=cfg.budget)
    out = rep.to_json()
    out.update({"name": L.name, "sigma": args.sigma})
    return out, EXIT_OK


def cmd_gamma_sigma(args, cfg):
    L = _load(args.file, cfg)
    s = _sigma(L, args.sigma)
    k = args.k if args.k is not None else 2
    if k > L.N:
        raise InputError(f"level {k} exceeds precision {L.N}")
    data = gamma_sigma_data(L, s, k, budget=cfg.budget)
    out = data.to_json()
    out["rank_identity"] = quotient_rank_identity(L, s, k, budget=cfg.budget)
    out.update({"name": L.name, "sigma": args.sigma})
    return out, EXIT_OK


def _bound_params(args) -> dict:
    params = {}
    if args.params:
        try:
            params.update(json.loads(Path(args.params).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read params: {exc}") from None
    for key in BOUND_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    return params


BOUND_KEYS = ["ell", "d", "T", "r1", "r2", "s", "order_G", "S", "S_ram", "A", "order_C", "dp_C", "d_inf",
              "r_inf", "dp_Cl", "dp_H2", "mu_p_in_L", "uniform", "p"]

BOUNDS: dict = {
    "n_ell": (lambda q: bd.n_ell(q["ell"]), "((ell-1)^(2^(ell-1)-1)-1)/(ell-2)"),
    "m_ell": (lambda q: bd.m_ell(q["ell"]), "1+ceil(2^(ell-1)log2(ell-1)-log2((ell-1)(ell-2)))"),
    "shalev_dl": (lambda q: bd.shalev_dl(q["d"], q.get("ell", 2), bool(q.get("uniform", False))),
                  "2^(d+1)-d-4+ceil(log2 d); d(2^(ell-1)-1)+ceil(log2 d); 2^(ell-1)-1"),
    "golod_shafarevich_infinite": (lambda q: bd.golod_shafarevich_infinite(q["d"], q.get("T", 0), q.get("r1", 0),
                                                                           q.get("r2", 0)),
                                   "(d-2)^2 >= 4(|T|+r1+r2+1) and d >= 2"),
    "unit_rank_bound": (lambda q: _unit_rank(q), "t >= |T|+d_inf+r_inf/2-(|G|-1)(...)[-1]; A = -(t_lower-|T|)"),
    "required_T": (lambda q: bd.required_T(q["A"], q["s"], q["order_G"], q["S"]), "ceil(A+s|G|(|S||G|+1))"),
    "cyclo_n0": (lambda q: bd.cyclo_n0(q["s"], q.get("r1", 2), q.get("order_C", 162), q.get("dp_C", 2),
                                       q.get("p", 3)),
                 "min n: r1 p^n-(|C|-1)dp_C-1 >= s|C|"),
}


def _unit_rank(q: dict) -> dict:
    fields = {k: q[k] for k in ("order_G", "r1", "r2", "d_inf", "r_inf", "S", "S_ram", "T", "dp_Cl", "dp_H2")
              if k in q}
    fields["mu_p_in_L"] = bool(q.get("mu_p_in_L", False))
    r = bd.unit_rank_bound(bd.BoundsInput(**fields))
    return {"t_lower": r.t_lower, "A": r.A, "variant": r.variant}


def cmd_bounds(args, cfg):
    if args.name not in BOUNDS:
        raise InputError(f"unknown bound {args.name!r}; known: {sorted(BOUNDS)}")
    fn, formula = BOUNDS[args.name]
    params = _bound_params(args)
    try:
        value = fn(params)
    except KeyError as exc:
        raise InputError(f"missing parameter {exc}") from None
    report = {"name": args.name, "value": value, "formula": formula, "inputs": params}
    if args.name == "required_T" and bd.required_T_raw(params["A"], params["s"], params["order_G"], params["S"]) < 0:
        report["note"] = "negative raw bound clamped at 0"
    return report, EXIT_OK


def cmd_catalog(args, cfg):
    params = {"p": 3}
    for key in ("p", "n", "k"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    if cfg.precision is not None:
        params["N"] = cfg.precision
    if args.name not in BUILDERS:
        raise InputError(f"unknown catalog entry {args.name!r}; known: {sorted(BUILDERS)}")
    try:
        entry = build(args.name, **params)
    except TypeError as exc:
        raise InputError(str(exc)) from None
    algebra = entry.algebra.to_json()
    if args.emit:
        Path(args.emit).write_text(json.dumps(algebra, sort_keys=True, indent=2) + "\n")
    return {"name": entry.name, "params": entry.params, "facts": entry.facts, "algebra": algebra}, EXIT_OK


def _check_entry(entry, cfg: RunConfig) -> List[dict]:
    L = entry.algebra
    checks = []

    def add(label, expected, got):
        checks.append({"check": f"{L.name}:{label}", "expected": expected, "got": got, "pass": expected == got})

    for name, facts in sorted(entry.facts.items()):
        s = named_sigma(L, name)
        add(f"{name}:fab", facts["fab"], is_fab(L))
        add(f"{name}:type", facts["type"], list(sigma_type(L, s).pair))
        level = facts.get("level", 2)
        levels = facts.get("levels")
        if levels:
            rep = fpmf_check(L, s, max(levels), budget=cfg.budget)
            add(f"{name}:fpmf", facts["fpmf"], rep.verdict == "FPMF")
            add(f"{name}:not_fpmf_certified", not facts["fpmf"], rep.verdict == "not-FPMF")
            for k in levels:
                data = gamma_sigma_data(L, s, k, budget=cfg.budget)
                add(f"{name}:k{k}:equals_circ", facts["equals_circ"], data.equals_circ)
                add(f"{name}:k{k}:dp_gamma_sigma", facts["dp_gamma_sigma"], data.dp_gamma_sigma)
                add(f"{name}:k{k}:G_cyclic", facts["G_cyclic"], data.G_abelian and len(data.G_invariants) <= 1)
                add(f"{name}:k{k}:sigma_fpf_on_G", True, data.sigma_fpf_on_G)
            continue
        rep = fpmf_check(L, s, level, budget=cfg.budget)
        add(f"{name}:fpmf", facts["fpmf"], rep.verdict == "FPMF")
        data = rep.data
        add(f"{name}:witness", facts["fpmf"], data.witness is not None)
        add(f"{name}:sigma_fpf_on_G", True, data.sigma_fpf_on_G)
        if "G" in facts:
            add(f"{name}:G", facts["G"], data.G_invariants)
        if "dp_G" in facts:
            add(f"{name}:dp_G", facts["dp_G"], data.dp_G)
        if "dp_gamma_sigma" in facts:
            add(f"{name}:dp_gamma_sigma", facts["dp_gamma_sigma"], data.dp_gamma_sigma)
        if "equals_circ" in facts:
            add(f"{name}:equals_circ", facts["equals_circ"], data.equals_circ)
        if "fixed_names" in facts:
            B = sigma_adapted_basis(L, s)
            add(f"{name}:fixed", [L.unit(L.index(n)) for n in facts["fixed_names"]], list(B.fixed()))
    return checks


def cmd_verify_paper(args, cfg):
    checks: List[dict] = []
    start = time.time()
    for entry in standard_entries(3, max(4, cfg.precision or 4)):
        checks += _check_entry(entry, cfg)

    def add(label, expected, got):
        checks.append({"check": label, "expected": expected, "got": got, "pass": expected == got})

    add("bounds:m_ell(2)", 1, bd.m_ell(2))
    add("bounds:m_ell(3)", 2, bd.m_ell(3))
    add("bounds:n_ell(2)", "abelian", bd.n_ell(2))
    add("bounds:n_ell(3)", 2, bd.n_ell(3))
    add("bounds:golod_shafarevich(5,0,1,0)", True, bd.golod_shafarevich_infinite(5, 0, 1, 0))
    add("bounds:shalev_dl(3).rank_only", 11, bd.shalev_dl(3, 2)["rank_only"])
    for s in range(1, 11):
        add(f"bounds:cyclo_n0(s={s},dp_C=2)", bd.cyclo_closed_form(s), bd.cyclo_n0(s, 2, 162, 2))
    rep = bd.cyclo_discrepancy_report(list(range(1, 11)))
    failed = [c["check"] for c in checks if not c["pass"]]
    report = {"checks": checks, "passed": len(checks) - len(failed), "failed": failed, "total": len(checks),
              "cyclo_dp_C_consistent": rep["consistent_dp_C"], "seed": cfg.seed}
    if args.timing:
        report["elapsed_s"] = round(time.time() - start, 2)
    return report, EXIT_OK if not failed else EXIT_FAIL


def _global_flags(parser: argparse.ArgumentParser, top: bool) -> None:
    # repeated on every subcommand so flags work before or after it
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--precision", type=int, default=default(None),
                        help="work modulo p^N (at most the input precision)")
    parser.add_argument("--level-max", type=int, default=default(3), help="highest quotient level for fpmf")
    parser.add_argument("--budget", type=int, default=default(None), help="element budget for explicit enumeration")
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--json", action="store_true", default=default(False), help="JSON output (the default)")
    parser.add_argument("--text", action="store_true", default=default(False), help="key: value output")
    parser.add_argument("--output", default=default(None), help="also write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="proplie", description=__doc__)
    _global_flags(ap, top=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, top=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("fab", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_fab)
    p = sub.add_parser("type", parents=[common])
    p.add_argument("file")
    p.add_argument("sigma")
    p.set_defaults(func=cmd_type)
    p = sub.add_parser("fpmf", parents=[common])
    p.add_argument("file")
    p.add_argument("sigma")
    p.add_argument("--k-max", type=int)
    p.set_defaults(func=cmd_fpmf)
    p = sub.add_parser("gamma-sigma", parents=[common])
    p.add_argument("file")
    p.add_argument("sigma")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_gamma_sigma)

    p = sub.add_parser("bounds", parents=[common])
    p.add_argument("name")
    p.add_argument("--params", help="JSON file of parameters")
    for key in BOUND_KEYS:
        flag = "--" + key.replace("_", "-")
        if key in ("mu_p_in_L", "uniform"):
            p.add_argument(flag, dest=key, action="store_const", const=True)
        elif key == "A":
            p.add_argument(flag, dest=key, type=Fraction)
        else:
            p.add_argument(flag, dest=key, type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("catalog", parents=[common])
    p.add_argument("name")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--emit", help="write the algebra JSON to this path")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify-paper", parents=[common])
    p.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-identical reports)")
    p.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    env_budget = os.environ.get("PROPLIE_BUDGET")
    try:
        budget = int(env_budget) if env_budget else (args.budget if args.budget is not None else default_budget())
        cfg = RunConfig(args.precision, args.level_max, budget, args.seed, "text" if args.text else "json",
                        args.output)
        random.seed(cfg.seed)
        handler: Callable = args.func
        report, code = handler(args, cfg)
    except (InputError, LieAlgebraError, InsufficientPrecision, ValueError) as exc:
        report, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_INPUT
    except BudgetExceeded as exc:
        report, code = {"error": "BudgetExceeded", "message": str(exc)}, EXIT_FAIL
    text = render(report, cfg.fmt if "cfg" in locals() else "json")
    print(text)
    if "cfg" in locals() and cfg.output:
        Path(cfg.output).write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
