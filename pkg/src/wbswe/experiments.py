"""Experiment runners: error norms, convergence tables and the test catalog.

Every runner returns a small result object with the measured numbers and a
``write(out_dir)`` method producing the CSV artifacts.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import problems as P
from .entropy import EntropyField
from .grid import Grid, make_grid, make_uniform, project_averages
from .integrator import Scheme, State
from .reconstruct import WenoParams
from .refsol import SUBCRITICAL_BUMP, TRANSCRITICAL_SHOCK, transcritical_shock_location
from .solver import solve
from .swe import G_DEFAULT

DEFAULT_NS = (100, 200, 400, 800)


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _write_rows(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([r if isinstance(r, str) else _fmt(r) for r in row])


# ------------------------------------------------------------------ norms

class Norms(NamedTuple):
    h: float
    q: float


def error_norm1(numeric: State, grid: Grid, reference: State, ref_grid: Grid,
                degree: int = 5) -> Norms:
    """Discrete 1-norm sum_j delta_j |U_j - U_j^ref|, reference averaged onto ``grid``.

    The reference is projected through a degree-5 interpolant of its
    primitive (see :func:`project_averages`); pass ``degree=1`` for
    piecewise-constant semantics.
    """
    ref = project_averages(ref_grid, np.stack([reference.h, reference.q], axis=1), grid,
                           degree=degree)
    d = np.abs(np.stack([numeric.h, numeric.q], axis=1) - ref)
    e = grid.widths @ d
    return Norms(float(e[0]), float(e[1]))


def pairwise_rates(Ns: Sequence[int], errors: Sequence[float]) -> list[float]:
    """log(e_N / e_M) / log(M / N) between successive resolutions (log2 for doubling)."""
    return [float(np.log(errors[k] / errors[k + 1]) / np.log(Ns[k + 1] / Ns[k]))
            for k in range(len(Ns) - 1)]


def fitted_rate(Ns: Sequence[int], errors: Sequence[float]) -> float:
    """Least-squares slope of -log(error) against log(N); NaN for a single N."""
    if len(Ns) < 2:
        return float("nan")
    slope = np.polyfit(np.log(np.asarray(Ns, float)), np.log(np.asarray(errors, float)), 1)[0]
    return float(-slope)


@dataclass
class ConvergenceReport:
    Ns: list
    errors: dict                       # variable -> list of errors, one per N
    label: str = ""

    def rates(self, var: str = "h") -> list[float]:
        return pairwise_rates(self.Ns, self.errors[var])

    def fitted(self, var: str = "h") -> float:
        return fitted_rate(self.Ns, self.errors[var])

    def rows(self):
        names = list(self.errors)
        out = []
        for k, N in enumerate(self.Ns):
            row = [N]
            for v in names:
                row.append(self.errors[v][k])
                row.append(self.rates(v)[k - 1] if k else float("nan"))
            out.append(row)
        return out

    def write(self, path) -> None:
        header = ["N"]
        for v in self.errors:
            header += [f"error_{v}", f"rate_{v}"]
        _write_rows(Path(path), header, self.rows())

    def table(self) -> str:
        lines = [self.label] if self.label else []
        for v in self.errors:
            r = self.rates(v)
            for k, N in enumerate(self.Ns):
                rate = f"{r[k - 1]:5.2f}" if k else "   --"
                lines.append(f"  {v} N={N:5d}  error={self.errors[v][k]:.3e}  rate={rate}")
            lines.append(f"  {v} fitted rate {self.fitted(v):.2f}")
        return "\n".join(lines)


# ------------------------------------------------------------------ config

@dataclass
class ExperimentConfig:
    experiment: str
    order: int = 3
    grid: str = "uniform"
    N: tuple = (200,)
    seed: int = 0
    w_c: float | None = None
    t_end: float | None = None
    cfl: float = 0.45
    epsilon: float | None = None
    g: float = G_DEFAULT
    out: Path | None = None
    entropy_flux: str = "matched"
    ref_N: int = 4096
    steps: int = 100                    # wb-random only
    cache: Path | None = None

    def __post_init__(self):
        if self.order not in (1, 2, 3, 4):
            raise ValueError("order must be 1..4")
        self.N = tuple(int(n) for n in np.atleast_1d(self.N))
        if min(self.N) < 5:
            raise ValueError("N must be at least 5 (the widest stencil)")


def scheme_for(problem: P.Problem, order: int, *, g: float = G_DEFAULT,
               epsilon: float | None = None, entropy_flux: str = "matched") -> Scheme:
    eps = problem.epsilon if epsilon is None else epsilon
    return Scheme(order=order, g=g, weno=WenoParams(epsilon=eps), bc=problem.bc,
                  entropy_flux=entropy_flux)


def grid_for(problem: P.Problem, family: str, N: int, *, seed: int = 0,
             w_c: float | None = None) -> Grid:
    return make_grid(family, problem.a, problem.b, N, seed=seed,
                     w_c=problem.w_c if w_c is None else w_c)


# ------------------------------------------------------ smooth convergence

def reference_solution(problem: P.Problem, N: int = 4096, order: int = 4, cfl: float = 0.45,
                       g: float = G_DEFAULT, cache: Path | None = None) -> tuple[Grid, State]:
    """Fine uniform-grid run used in place of the exact solution.

    With ``cache`` set the result is stored as .npz keyed by the parameters.
    """
    grid = make_uniform(problem.a, problem.b, N)
    key = json.dumps([problem.name, problem.a, problem.b, problem.t_end, N, order, cfl, g])
    path = None
    if cache is not None:
        tag = hashlib.sha1(key.encode()).hexdigest()[:16]
        path = Path(cache) / f"ref-{problem.name}-{N}-{tag}.npz"
        if path.exists():
            d = np.load(path)
            return grid, State(d["h"], d["q"], d["z"], float(d["t"]))
    scheme = scheme_for(problem, order, g=g)
    st = solve(problem.initial_state(grid), grid, scheme, problem.t_end, cfl).state
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, h=st.h, q=st.q, z=st.z, t=st.t)
    return grid, st


@dataclass
class ConvergenceResult:
    report: ConvergenceReport
    max_S: list
    max_pos_S: list
    entropy_fields: list = field(default_factory=list, repr=False)
    states: list = field(default_factory=list, repr=False)
    grids: list = field(default_factory=list, repr=False)

    @property
    def entropy_rate(self) -> float:
        return fitted_rate(self.report.Ns, self.max_S)

    def write(self, out: Path, tag: str) -> None:
        out = Path(out)
        self.report.write(out / f"{tag}_errors.csv")
        _write_rows(out / f"{tag}_entropy.csv", ["N", "max_abs_S", "max_positive_S"],
                    zip(self.report.Ns, self.max_S, self.max_pos_S))
        for N, st, gr, ent in zip(self.report.Ns, self.states, self.grids, self.entropy_fields):
            st.to_csv(out / f"{tag}_N{N}_state.csv", gr)
            ent.to_csv(out / f"{tag}_N{N}_S.csv", gr)


def convergence_study(order: int, family: str = "uniform", Ns: Sequence[int] = DEFAULT_NS, *,
                      reference: tuple[Grid, State] | None = None, ref_N: int = 4096,
                      seed: int = 0, cfl: float = 0.45, epsilon: float | None = None,
                      g: float = G_DEFAULT, cache: Path | None = None) -> ConvergenceResult:
    """Smooth periodic test: 1-norm errors against a fine reference and max|S|."""
    prob = P.smooth_periodic()
    if reference is None:
        reference = reference_solution(prob, ref_N, cfl=cfl, g=g, cache=cache)
    rg, rs = reference
    scheme = scheme_for(prob, order, g=g, epsilon=epsilon)
    eh, eq, mS, mP, fields, states, grids = [], [], [], [], [], [], []
    for N in Ns:
        grid = grid_for(prob, family, N, seed=seed)
        r = solve(prob.initial_state(grid), grid, scheme, prob.t_end, cfl, track_entropy=True)
        e = error_norm1(r.state, grid, rs, rg)
        eh.append(e.h)
        eq.append(e.q)
        mS.append(r.entropy.max_abs)
        mP.append(r.entropy.max_positive)
        fields.append(r.entropy)
        states.append(r.state)
        grids.append(grid)
    rep = ConvergenceReport(list(Ns), {"h": eh, "q": eq}, f"order {order}, {family} grid")
    return ConvergenceResult(rep, mS, mP, fields, states, grids)


# ------------------------------------------------------------- lake at rest

@dataclass
class WellBalanceResult:
    order: int
    family: str
    N: int
    dH: float           # max |(h+z)_{j+1} - (h+z)_j|
    q_inf: float
    hhat_min: float
    state: State = field(repr=False)
    grid: Grid = field(repr=False)

    def write(self, out: Path, tag: str) -> None:
        _write_rows(Path(out) / f"{tag}_summary.csv",
                    ["order", "grid", "N", "max_dH", "max_abs_q"],
                    [[self.order, self.family, self.N, self.dH, self.q_inf]])
        self.state.to_csv(Path(out) / f"{tag}_state.csv", self.grid)


def well_balance(order: int, family: str, N: int, *, steps: int = 100, seed: int = 0,
                 H: float = 1.5, cfl: float = 0.45, g: float = G_DEFAULT) -> WellBalanceResult:
    prob = P.lake_at_rest_random(H, seed)
    grid = grid_for(prob, family, N, seed=seed)
    r = solve(prob.initial_state(grid), grid, scheme_for(prob, order, g=g), prob.t_end, cfl,
              n_steps=steps)
    st = r.state
    return WellBalanceResult(order, family, N, float(np.max(np.abs(np.diff(st.H)))),
                             float(np.max(np.abs(st.q))), r.hhat_min, st, grid)


# ------------------------------------------------------------ steady flows

@dataclass
class SteadyResult:
    report: ConvergenceReport
    states: list = field(repr=False)
    grids: list = field(repr=False)

    def write(self, out: Path, tag: str) -> None:
        self.report.write(Path(out) / f"{tag}_errors.csv")
        for N, st, gr in zip(self.report.Ns, self.states, self.grids):
            st.to_csv(Path(out) / f"{tag}_N{N}_state.csv", gr)


def subcritical_study(order: int, family: str = "uniform", Ns: Sequence[int] = DEFAULT_NS, *,
                      w_c: float | None = None, t_end: float | None = None, cfl: float = 0.45,
                      epsilon: float | None = None, g: float = G_DEFAULT) -> SteadyResult:
    """Run from the exact subcritical flow and measure the drift from it."""
    prob = P.subcritical(replace(SUBCRITICAL_BUMP, g=g))
    if t_end is not None:
        prob = replace(prob, t_end=t_end)
    scheme = scheme_for(prob, order, g=g, epsilon=epsilon)
    eh, eq, states, grids = [], [], [], []
    for N in Ns:
        grid = grid_for(prob, family, N, w_c=w_c)
        exact = prob.exact(grid)
        st = solve(exact, grid, scheme, prob.t_end, cfl).state
        e = error_norm1(st, grid, exact, grid)
        eh.append(e.h)
        eq.append(e.q)
        states.append(st)
        grids.append(grid)
    rep = ConvergenceReport(list(Ns), {"h": eh, "q": eq}, f"order {order}, {family} grid")
    return SteadyResult(rep, states, grids)


@dataclass
class ShockResult:
    order: int
    family: str
    N: int
    x_exact: float
    x_numeric: float
    cells_off: float        # distance in units of the local cell width
    overshoot: float        # worst excursion outside the exact range, relative to the jump
    state: State = field(repr=False)
    grid: Grid = field(repr=False)
    profile: object = field(repr=False, default=None)

    def write(self, out: Path, tag: str) -> None:
        out = Path(out)
        _write_rows(out / f"{tag}_summary.csv",
                    ["order", "grid", "N", "x_shock_exact", "x_shock_numeric", "cells_off",
                     "overshoot"],
                    [[self.order, self.family, self.N, self.x_exact, self.x_numeric,
                      self.cells_off, self.overshoot]])
        self.state.to_csv(out / f"{tag}_state.csv", self.grid)
        if self.profile is not None:
            x = np.linspace(self.grid.a, self.grid.b, 4001)
            self.profile.to_csv(out / f"{tag}_exact.csv", x)


def locate_jump(h, grid: Grid) -> tuple[int, float]:
    """Interface with the largest height jump: (index of the left cell, position)."""
    j = int(np.argmax(np.abs(np.diff(h))))
    return j, float(grid.interfaces[j + 1])


def transcritical_run(order: int, family: str = "uniform", N: int = 200, *,
                      w_c: float | None = None, t_end: float | None = None,
                      cfl: float = 0.45, epsilon: float | None = None,
                      g: float = G_DEFAULT, window: int = 10) -> ShockResult:
    from .refsol import steady_transcritical_shock

    sp = replace(TRANSCRITICAL_SHOCK, g=g)
    prob = P.transcritical(sp)
    if t_end is not None:
        prob = replace(prob, t_end=t_end)
    grid = grid_for(prob, family, N, w_c=w_c)
    sol = steady_transcritical_shock(sp, grid)
    exact = State(sol.h, sol.q, sol.z)
    st = solve(exact, grid, scheme_for(prob, order, g=g, epsilon=epsilon), prob.t_end, cfl).state
    xs = transcritical_shock_location(sp)
    j, xn = locate_jump(st.h, grid)
    width = grid.widths[j] if xn >= xs else grid.widths[j + 1]
    k = int(np.searchsorted(grid.interfaces, xs)) - 1
    lo, hi = max(k - window, 0), min(k + window + 1, grid.n_cells)
    ex, nu = sol.h[lo:hi], st.h[lo:hi]
    jump = float(sol.profile(np.array([xs + 1e-9]))[0] - sol.profile(np.array([xs - 1e-9]))[0])
    over = max(float(np.max(nu - ex.max())), float(np.max(ex.min() - nu)), 0.0) / abs(jump)
    return ShockResult(order, family, N, xs, xn, abs(xn - xs) / width, over, st, grid, sol)


# --------------------------------------------------------- small pulse test

@dataclass
class PulseResult:
    order: int
    family: str
    N: int
    peak: float             # max (H - 1)
    trough: float           # min (H - 1)
    ref_peak: float
    ref_trough: float
    quiet_max: float        # largest |H - 1| where the reference is at rest
    state: State = field(repr=False)
    grid: Grid = field(repr=False)
    ref: tuple = field(repr=False, default=None)

    @property
    def peak_error(self) -> float:
        return abs(self.peak - self.ref_peak) / abs(self.ref_peak)

    def write(self, out: Path, tag: str) -> None:
        out = Path(out)
        _write_rows(out / f"{tag}_summary.csv",
                    ["order", "grid", "N", "peak", "trough", "ref_peak", "ref_trough",
                     "quiet_max"],
                    [[self.order, self.family, self.N, self.peak, self.trough,
                      self.ref_peak, self.ref_trough, self.quiet_max]])
        self.state.to_csv(out / f"{tag}_state.csv", self.grid)
        if self.ref is not None:
            self.ref[1].to_csv(out / f"{tag}_reference.csv", self.ref[0])


def pulse_run(order: int, family: str = "uniform", N: int = 200, *,
              reference: tuple[Grid, State] | None = None, ref_N: int = 4096,
              seed: int = 0, t_end: float | None = None, cfl: float = 0.45,
              epsilon: float | None = None, g: float = G_DEFAULT, margin: float = 0.05,
              cache: Path | None = None) -> PulseResult:
    """Small perturbation of still water next to a bump.

    Cells farther than ``margin`` from any place where the reference deviates
    from rest by more than 1% of the pulse make up the quiet region.
    """
    prob = P.small_pulse()
    if t_end is not None:
        prob = replace(prob, t_end=t_end)
    if reference is None:
        reference = reference_solution(prob, ref_N, order=order, cfl=cfl, g=g, cache=cache)
    rg, rs = reference
    grid = grid_for(prob, family, N, seed=seed)
    st = solve(prob.initial_state(grid), grid, scheme_for(prob, order, g=g, epsilon=epsilon),
               prob.t_end, cfl).state
    dev = st.H - 1.0
    rdev = rs.H - 1.0
    active = rg.centers[np.abs(rdev) > 0.01 * P.PULSE_AMPLITUDE]
    if active.size:
        dist = np.min(np.abs(grid.centers[:, None] - active[None, :]), axis=1)
        quiet = dist > margin
    else:
        quiet = np.ones(grid.n_cells, bool)
    qmax = float(np.max(np.abs(dev[quiet]))) if quiet.any() else 0.0
    return PulseResult(order, family, N, float(dev.max()), float(dev.min()),
                       float(rdev.max()), float(rdev.min()), qmax, st, grid, reference)


# ---------------------------------------------------------- entropy on shocks

@dataclass
class ShockEntropyResult:
    order: int
    Ns: list
    peaks: list
    fields: list = field(repr=False)
    states: list = field(repr=False)
    grids: list = field(repr=False)

    @property
    def ratios(self) -> list[float]:
        return [b / a for a, b in zip(self.peaks, self.peaks[1:])]

    def write(self, out: Path, tag: str) -> None:
        out = Path(out)
        _write_rows(out / f"{tag}_peaks.csv", ["N", "peak_abs_S"], zip(self.Ns, self.peaks))
        for N, f, st, gr in zip(self.Ns, self.fields, self.states, self.grids):
            f.to_csv(out / f"{tag}_N{N}_S.csv", gr)
            st.to_csv(out / f"{tag}_N{N}_state.csv", gr)


def shock_entropy_growth(order: int, Ns: Sequence[int] = DEFAULT_NS, *, family: str = "uniform",
                         background: float = 1.0, window: float = 0.1, cfl: float = 0.45,
                         t_end: float | None = None, epsilon: float | None = None,
                         g: float = G_DEFAULT) -> ShockEntropyResult:
    """Peak |S| on the two-shocks test.

    The peak of a single step depends on where the shock sits inside its
    cell, so the reported peak is the largest max|S| over the final
    ``window`` fraction of the run.
    """
    prob = P.two_shocks(background)
    if t_end is not None:
        prob = replace(prob, t_end=t_end)
    scheme = scheme_for(prob, order, g=g, epsilon=epsilon)
    peaks, fields, states, grids = [], [], [], []
    for N in Ns:
        grid = grid_for(prob, family, N)
        env = [0.0]

        def track(s, rec, ent, env=env):
            if s.t >= (1.0 - window) * prob.t_end:
                env[0] = max(env[0], ent.max_abs)

        r = solve(prob.initial_state(grid), grid, scheme, prob.t_end, cfl,
                  track_entropy=True, callback=track)
        peaks.append(env[0])
        fields.append(r.entropy)
        states.append(r.state)
        grids.append(grid)
    return ShockEntropyResult(order, list(Ns), peaks, fields, states, grids)


# ------------------------------------------------- sin canal and flux choice

@dataclass
class CanalResult:
    order: int
    N: int
    entropy_flux: str
    entropy: EntropyField
    state: State = field(repr=False)
    grid: Grid = field(repr=False)

    def write(self, out: Path, tag: str) -> None:
        out = Path(out)
        self.state.to_csv(out / f"{tag}_state.csv", self.grid)
        self.entropy.to_csv(out / f"{tag}_S.csv", self.grid)
        _write_rows(out / f"{tag}_summary.csv",
                    ["order", "N", "entropy_flux", "max_abs_S", "max_positive_S"],
                    [[self.order, self.N, self.entropy_flux, self.entropy.max_abs,
                      self.entropy.max_positive]])


def sin_canal_run(order: int, N: int = 400, *, family: str = "uniform", seed: int = 0,
                  entropy_flux: str = "matched", t_end: float | None = None,
                  cfl: float = 0.45, epsilon: float | None = None,
                  g: float = G_DEFAULT) -> CanalResult:
    prob = P.sin_canal(g)
    if t_end is not None:
        prob = replace(prob, t_end=t_end)
    grid = grid_for(prob, family, N, seed=seed)
    scheme = scheme_for(prob, order, g=g, epsilon=epsilon, entropy_flux=entropy_flux)
    r = solve(prob.initial_state(grid), grid, scheme, prob.t_end, cfl, track_entropy=True)
    return CanalResult(order, N, entropy_flux, r.entropy, r.state, grid)


def entropy_compare(order: int, N: int = 400, **kw) -> dict[str, CanalResult]:
    """Sin-canal run with the matched and the averaged numerical entropy flux."""
    return {v: sin_canal_run(order, N, entropy_flux=v, **kw) for v in ("matched", "averaged")}
