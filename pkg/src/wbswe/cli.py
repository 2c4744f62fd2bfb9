"""Command line entry point: ``python -m wbswe <experiment> [options]``.

Options may also come from a plain-text file of ``key = value`` lines given
with ``--config``; flags on the command line win.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import fields
from pathlib import Path

from . import experiments as X
from .grid import GRID_FAMILIES
from .numflux import ENTROPY_FLUX_VARIANTS
from .swe import G_DEFAULT, NegativeDepthError

EXPERIMENTS = ("convergence", "wb-random", "pulse", "transcritical", "subcritical",
               "two-shocks", "sin-canal", "entropy-compare")
GRID_CHOICES = GRID_FAMILIES + ("quasi-regular", "locally-refined", "adapted")

# option name in the config file / on the command line -> ExperimentConfig field
_KEYS = {"order": "order", "grid": "grid", "N": "N", "n": "N", "seed": "seed", "wc": "w_c",
         "w_c": "w_c", "cfl": "cfl", "tend": "t_end", "t_end": "t_end", "eps": "epsilon",
         "epsilon": "epsilon", "g": "g", "out": "out", "entropy_flux": "entropy_flux",
         "entropy-flux": "entropy_flux", "ref_n": "ref_N", "ref-n": "ref_N", "steps": "steps",
         "cache": "cache"}


def read_config_file(path) -> dict:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    text = Path(path).read_text()
    cp.read_string("[run]\n" + text)
    out = {}
    for k, v in cp["run"].items():
        name = _KEYS.get(k)
        if name is None:
            raise ValueError(f"unknown config key {k!r} in {path}")
        out[name] = v
    return out


def _coerce(name: str, value):
    if value is None:
        return None
    if name in ("order", "seed", "ref_N", "steps"):
        return int(value)
    if name in ("w_c", "cfl", "t_end", "epsilon", "g"):
        return float(value)
    if name == "N":
        if isinstance(value, str):
            value = value.replace(",", " ").split()
        return tuple(int(v) for v in value)
    if name in ("out", "cache"):
        return Path(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wbswe", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", type=Path, help="file of key = value lines")
    p.add_argument("--order", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--grid", choices=GRID_CHOICES)
    p.add_argument("--N", nargs="+", type=int, help="number of cells (several for a sweep)")
    p.add_argument("--seed", type=int, help="random grid and random bottom seed")
    p.add_argument("--wc", type=float, help="center of the refined grid, in [0, 1]")
    p.add_argument("--cfl", type=float)
    p.add_argument("--tend", type=float, help="final time (default: the test's own)")
    p.add_argument("--eps", type=float, help="WENO regularization epsilon")
    p.add_argument("--g", type=float, help=f"gravity (default {G_DEFAULT})")
    p.add_argument("--out", type=Path, help="output directory for CSV files")
    p.add_argument("--entropy-flux", choices=ENTROPY_FLUX_VARIANTS)
    p.add_argument("--ref-N", type=int, help="cells of the fine reference run")
    p.add_argument("--steps", type=int, help="time steps for wb-random")
    p.add_argument("--cache", type=Path, help="directory caching reference runs")
    return p


def config_from_args(args: argparse.Namespace) -> X.ExperimentConfig:
    values = {}
    if args.config is not None:
        values.update(read_config_file(args.config))
    cli = {"order": args.order, "grid": args.grid, "N": args.N, "seed": args.seed,
           "w_c": args.wc, "cfl": args.cfl, "t_end": args.tend, "epsilon": args.eps,
           "g": args.g, "out": args.out, "entropy_flux": args.entropy_flux,
           "ref_N": args.ref_N, "steps": args.steps, "cache": args.cache}
    values.update({k: v for k, v in cli.items() if v is not None})
    known = {f.name for f in fields(X.ExperimentConfig)}
    kw = {k: _coerce(k, v) for k, v in values.items() if k in known}
    if args.experiment in ("convergence", "subcritical", "two-shocks") and "N" not in kw:
        kw["N"] = X.DEFAULT_NS
    return X.ExperimentConfig(experiment=args.experiment, **kw)


def run_experiment(cfg: X.ExperimentConfig) -> list[str]:
    """Run one catalog entry, write its CSV files, and return summary lines."""
    out = cfg.out
    common = dict(cfl=cfg.cfl, g=cfg.g)
    tag = f"{cfg.experiment}_p{cfg.order}_{cfg.grid}"
    lines = []
    name = cfg.experiment
    if name == "convergence":
        res = X.convergence_study(cfg.order, cfg.grid, cfg.N, ref_N=cfg.ref_N, seed=cfg.seed,
                                  epsilon=cfg.epsilon, cache=cfg.cache, **common)
        lines.append(res.report.table())
        lines.append(f"  max|S| {['%.3e' % s for s in res.max_S]}  "
                     f"fitted decay rate {res.entropy_rate:.2f}")
    elif name == "wb-random":
        res = [X.well_balance(cfg.order, cfg.grid, N, steps=cfg.steps, seed=cfg.seed, **common)
               for N in cfg.N]
        for r in res:
            lines.append(f"order {r.order} {r.family} N={r.N}: max|d(h+z)| = {r.dH:.3e}  "
                         f"max|q| = {r.q_inf:.3e}")
    elif name == "pulse":
        res = [X.pulse_run(cfg.order, cfg.grid, N, ref_N=cfg.ref_N, seed=cfg.seed,
                           t_end=cfg.t_end, epsilon=cfg.epsilon, cache=cfg.cache, **common)
               for N in cfg.N]
        for r in res:
            lines.append(f"order {r.order} {r.family} N={r.N}: peak {r.peak:.4e} "
                         f"(reference {r.ref_peak:.4e}, off by {100 * r.peak_error:.1f}%), "
                         f"quiet-region max {r.quiet_max:.2e}")
    elif name == "transcritical":
        res = [X.transcritical_run(cfg.order, cfg.grid, N, w_c=cfg.w_c, t_end=cfg.t_end,
                                   epsilon=cfg.epsilon, **common) for N in cfg.N]
        for r in res:
            lines.append(f"order {r.order} {r.family} N={r.N}: shock at {r.x_numeric:.6f} "
                         f"(exact {r.x_exact:.15f}, {r.cells_off:.2f} cells), "
                         f"overshoot {100 * r.overshoot:.2f}% of the jump")
    elif name == "subcritical":
        res = X.subcritical_study(cfg.order, cfg.grid, cfg.N, w_c=cfg.w_c, t_end=cfg.t_end,
                                  epsilon=cfg.epsilon, **common)
        lines.append(res.report.table())
    elif name == "two-shocks":
        res = X.shock_entropy_growth(cfg.order, cfg.N, family=cfg.grid, t_end=cfg.t_end,
                                     epsilon=cfg.epsilon, **common)
        lines.append(f"order {cfg.order}: peak |S| {['%.3e' % p for p in res.peaks]}  "
                     f"ratios {['%.2f' % r for r in res.ratios]}")
    elif name == "sin-canal":
        res = [X.sin_canal_run(cfg.order, N, family=cfg.grid, seed=cfg.seed,
                               entropy_flux=cfg.entropy_flux, t_end=cfg.t_end,
                               epsilon=cfg.epsilon, **common) for N in cfg.N]
        for r in res:
            lines.append(f"order {r.order} N={r.N} ({r.entropy_flux}): max|S| "
                         f"{r.entropy.max_abs:.3e}  max S {r.entropy.max_positive:.3e}")
    elif name == "entropy-compare":
        res = []
        for N in cfg.N:
            pair = X.entropy_compare(cfg.order, N, family=cfg.grid, seed=cfg.seed,
                                     t_end=cfg.t_end, epsilon=cfg.epsilon, **common)
            res.extend(pair.values())
            m, a = pair["matched"].entropy, pair["averaged"].entropy
            lines.append(f"order {cfg.order} N={N}: max positive S matched {m.max_positive:.3e}"
                         f"  averaged {a.max_positive:.3e}")
    else:  # argparse already restricts the choices
        raise ValueError(f"unknown experiment {name!r}")

    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        if isinstance(res, list):
            for r in res:
                flux = f"_{r.entropy_flux}" if name == "entropy-compare" else ""
                r.write(out, f"{tag}_N{r.N}{flux}")
        else:
            res.write(out, tag)
        lines.append(f"CSV files written to {out}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValueError, OSError) as e:
        parser.error(str(e))
    try:
        for line in run_experiment(cfg):
            print(line)
    except NegativeDepthError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
