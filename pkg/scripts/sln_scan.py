"""Scan sl_n at level 2: for each diagonal involution report G and the fpmf verdict with timings."""

import argparse
import time

from proplie.catalog import make_sl
from proplie.finitep import gamma_sigma_data
from proplie.liealg import named_sigma


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4])
    args = ap.parse_args()
    for n in args.n:
        t0 = time.perf_counter()
        L = make_sl(args.p, n, N=3).algebra
        for a in L.automorphisms:
            d = gamma_sigma_data(L, named_sigma(L, a.name), 2)
            print(f"n={n} {a.name}: G={d.G_invariants} dp_G={d.dp_G} witness={d.witness is not None} "
                  f"fpf={d.sigma_fpf_on_G} ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
