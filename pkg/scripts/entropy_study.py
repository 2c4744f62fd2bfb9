"""Entropy-production runs: growth of the peak on shocks, the matched versus
averaged entropy flux on the sin canal, and the transcritical and pulse tests.

    python3 scripts/entropy_study.py --out results [--quick]
"""

import argparse
from pathlib import Path

from wbswe import experiments as X
from wbswe import problems as P


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    Ns = (50, 100) if args.quick else X.DEFAULT_NS
    N = 100 if args.quick else 400
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    for order in (1, 2, 3, 4):
        res = X.shock_entropy_growth(order, Ns)
        res.write(out, f"two_shocks_p{order}")
        print(f"two shocks p{order}: peaks {['%.3e' % p for p in res.peaks]} "
              f"ratios {['%.2f' % r for r in res.ratios]}", flush=True)

    for order in (2, 3, 4):
        for name, r in X.entropy_compare(order, N).items():
            r.write(out, f"sin_canal_p{order}_N{N}_{name}")
            print(f"sin canal p{order} {name:8s}: max S {r.entropy.max_positive:.3e}",
                  flush=True)

    for family in ("uniform", "refined"):
        for order in (1, 2, 3, 4):
            r = X.transcritical_run(order, family, N // 2)
            r.write(out, f"transcritical_p{order}_{family}")
            print(f"transcritical p{order} {family}: {r.cells_off:.2f} cells off, "
                  f"overshoot {100 * r.overshoot:.2f}%", flush=True)

    for order in (3, 4):
        ref = X.reference_solution(P.small_pulse(), 1024 if args.quick else 4096, order=order)
        for family in ("uniform", "quasi", "random"):
            r = X.pulse_run(order, family, N, reference=ref)
            r.write(out, f"pulse_p{order}_{family}")
            print(f"pulse p{order} {family}: peak off {100 * r.peak_error:.1f}%, "
                  f"quiet max {r.quiet_max:.1e}", flush=True)


if __name__ == "__main__":
    main()
