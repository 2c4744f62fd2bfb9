"""Regenerate the error and well-balance tables as CSV files.

    python3 scripts/tables.py --out results            # full sweep, minutes
    python3 scripts/tables.py --out results --quick    # N = 50, 100 only
"""

import argparse
import time
from pathlib import Path

from wbswe import experiments as X
from wbswe import problems as P


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--cache", type=Path, default=None, help="reference-run cache directory")
    args = ap.parse_args()
    Ns = (50, 100) if args.quick else X.DEFAULT_NS
    ref_N = 1024 if args.quick else 4096
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.time()
    ref = X.reference_solution(P.smooth_periodic(), ref_N, cache=args.cache)
    for family in ("uniform", "quasi", "random"):
        for order in (1, 2, 3, 4):
            res = X.convergence_study(order, family, Ns, reference=ref)
            res.write(out, f"smooth_p{order}_{family}")
            print(res.report.table(), f"| max|S| rate {res.entropy_rate:.2f}", flush=True)

    for family in ("uniform", "refined"):
        for order in (1, 2, 3, 4):
            res = X.subcritical_study(order, family, Ns, w_c=0.5)
            res.write(out, f"subcritical_p{order}_{family}")
            print(res.report.table(), flush=True)

    for order in (1, 2, 3, 4):
        for family in ("uniform", "quasi", "random", "refined"):
            for N in Ns:
                r = X.well_balance(order, family, N, seed=N)
                r.write(out, f"lake_p{order}_{family}_N{N}")
                print(f"lake at rest p{order} {family:8s} N={N:4d}: "
                      f"max|d(h+z)| {r.dH:.1e}  max|q| {r.q_inf:.1e}", flush=True)
    print(f"done in {time.time() - t0:.0f} s; CSV files in {out}")


if __name__ == "__main__":
    main()
