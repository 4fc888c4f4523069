"""Decompose the Frattini section of the semidirect family as a module over G.

For each k the group G is cyclic of order p^k, and conjugation by y (which generates G) acts on
Gamma_sigma / Phi(Gamma_sigma). The script prints the Jordan type of that action
at the first level where it becomes visible, plus the level-by-level fpmf history.
"""

import argparse
import json

from proplie.catalog import make_semidirect
from proplie.finitep import fpmf_check, frattini_section_jordan_type, gamma_sigma_data
from proplie.liealg import named_sigma


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()
    rows = []
    for k in args.k:
        entry = make_semidirect(args.p, k, N=k + 2)
        L = entry.algebra
        s = named_sigma(L, "sigma")
        rep = fpmf_check(L, s, k + 1)
        level = rep.level
        data = gamma_sigma_data(L, s, level)
        jt = frattini_section_jordan_type(L, s, level, L.unit(1))
        rows.append({"k": k, "verdict": rep.verdict, "level": level, "G": data.G_invariants,
                     "dp_gamma_sigma": data.dp_gamma_sigma, "jordan_type": jt, "history": rep.history})
    print(json.dumps(rows, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
