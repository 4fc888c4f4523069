"""Tabulate the cyclotomic threshold n0(s) against its closed form for two readings of dp_C."""

import argparse

from proplie.bounds import cyclo_discrepancy_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-max", type=int, default=30)
    args = ap.parse_args()
    rep = cyclo_discrepancy_report(list(range(0, args.s_max + 1)))
    print(f"{'s':>4} {'closed':>7} {'dp_C=2':>7} {'dp_C=3':>7}")
    for r in rep["rows"]:
        mark = "" if r["dp_C=3"] == r["closed_form"] else "  <- dp_C=3 differs"
        if r["dp_C=2"] != r["closed_form"]:
            mark += "  <- dp_C=2 differs"
        print(f"{r['s']:>4} {r['closed_form']:>7} {r['dp_C=2']:>7} {r['dp_C=3']:>7}{mark}")


if __name__ == "__main__":
    main()
