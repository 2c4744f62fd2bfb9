"""Exact steady shallow-water flows over a bump.

Steady 1D flow keeps q constant and the Bernoulli head
E = q^2 / (2 h^2) + g (h + z) constant along smooth branches; across a steady
shock the momentum flux q^2/h + g h^2 / 2 is continuous instead.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .grid import Grid
from .swe import G_DEFAULT


class SteadyStateError(ValueError):
    pass


class ChokedFlowError(SteadyStateError):
    """The requested head is below the critical head: no steady depth exists."""


class BernoulliRoots(NamedTuple):
    subcritical: np.ndarray
    supercritical: np.ndarray


def critical_depth(q0, g=G_DEFAULT):
    return np.cbrt(q0 * q0 / g)


def critical_head(q0, z, g=G_DEFAULT):
    hc = critical_depth(q0, g)
    return 1.5 * g * hc + g * np.asarray(z, dtype=float) if q0 else g * np.asarray(z, dtype=float)


def bernoulli_head(h, q0, z, g=G_DEFAULT):
    return q0 * q0 / (2.0 * h * h) + g * (h + z)


def _newton(h, q2, B, g, rising):
    # f(h) = q2 / (2 h^2) + g h - B is convex; starting where f > 0 on the
    # correct side of the root, Newton iterates approach the root monotonically
    for _ in range(200):
        f = 0.5 * q2 / (h * h) + g * h - B
        df = g - q2 / (h * h * h)
        step = np.where(df != 0.0, f / np.where(df != 0.0, df, 1.0), 0.0)
        h_new = h - step
        h_new = np.where(rising, np.maximum(h_new, h), np.minimum(h_new, h))
        if np.all(np.abs(h_new - h) <= 4.0 * np.spacing(h)):
            return h_new
        h = h_new
    return h


def bernoulli_roots(E, q0, z, g=G_DEFAULT) -> BernoulliRoots:
    """Positive depths with the given Bernoulli head.

    Returns the subcritical (largest) and supercritical (smallest) roots. For
    ``q0 == 0`` the only root is the hydrostatic depth and the supercritical
    entry is NaN. At the critical head both entries equal the critical depth.
    """
    E = np.asarray(E, dtype=float)
    z = np.asarray(z, dtype=float)
    B = E - g * z
    if q0 == 0.0:
        h = B / g
        if np.any(h <= 0):
            raise ChokedFlowError("head below the bottom: no positive depth")
        return BernoulliRoots(h, np.full_like(h, np.nan))
    q2 = q0 * q0
    hc = critical_depth(q0, g)
    Bc = 1.5 * g * hc
    if np.any(B < Bc * (1.0 - 1e-14)):
        raise ChokedFlowError("head below the critical head: flow is choked")
    at_crit = B <= Bc * (1.0 + 1e-15)
    Bs = np.maximum(B, Bc)
    h_sub = _newton(np.maximum(Bs / g, hc), q2, Bs, g, rising=False)
    h_sup = _newton(np.minimum(q0 / np.sqrt(2.0 * Bs), hc), q2, Bs, g, rising=True)
    h_sub = np.where(at_crit, hc, h_sub)
    h_sup = np.where(at_crit, hc, h_sup)
    if h_sub.ndim == 0:
        return BernoulliRoots(float(h_sub), float(h_sup))
    return BernoulliRoots(h_sub, h_sup)


def momentum_flux(h, q0, g=G_DEFAULT):
    return q0 * q0 / h + 0.5 * g * h * h


def froude(h, q0, g=G_DEFAULT):
    return np.abs(q0) / (h * np.sqrt(g * h))


# ------------------------------------------------------------------ bottoms

def gaussian_bump(x):
    return 0.2 * np.exp(-(np.asarray(x, dtype=float) - 12.5) ** 2)


def parabolic_hump(x):
    x = np.asarray(x, dtype=float)
    return np.where((x >= 8.0) & (x <= 12.0), 0.2 - 0.05 * (x - 10.0) ** 2, 0.0)


@dataclass(frozen=True)
class SteadyProblem:
    q0: float
    h_out: float
    bottom: Callable = gaussian_bump
    a: float = 0.0
    b: float = 25.0
    g: float = G_DEFAULT
    breakpoints: tuple = ()  # kinks of the bottom, for quadrature
    crest: float | None = None

    def __post_init__(self):
        if self.q0 < 0:
            raise ValueError("discharge must be non-negative")
        if not self.h_out > 0:
            raise ValueError("outflow depth must be positive")


SUBCRITICAL_BUMP = SteadyProblem(q0=4.42, h_out=2.0, bottom=gaussian_bump, crest=12.5)
TRANSCRITICAL_SHOCK = SteadyProblem(q0=0.18, h_out=0.33, bottom=parabolic_hump,
                                    breakpoints=(8.0, 12.0), crest=10.0)


@dataclass
class SteadySolution:
    h: np.ndarray
    q: np.ndarray
    z: np.ndarray
    shock_location: float | None
    profile: Callable = field(repr=False)
    bottom: Callable = field(repr=False)

    def to_csv(self, path, x) -> None:
        """Point values of the exact profile at positions ``x``."""
        x = np.asarray(x, dtype=float)
        h = self.profile(x)
        z = self.bottom(x)
        with open(Path(path), "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "h", "q", "z", "H"])
            for row in zip(x, h, np.full_like(x, self.q[0]), z, h + z):
                w.writerow([f"{v:.17g}" for v in row])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(3)


def gauss_cell_averages(f, grid: Grid, breakpoints=()) -> np.ndarray:
    """Cell averages of ``f`` by 3-point Gauss-Legendre on each cell.

    Cells containing one of ``breakpoints`` are split there so that kinks and
    jumps of ``f`` do not spoil the quadrature.
    """
    xl, xr = grid.interfaces[:-1], grid.interfaces[1:]
    out = _gauss(f, xl, xr)
    for p in sorted(set(breakpoints)):
        inside = np.flatnonzero((xl < p) & (p < xr))
        for j in inside:
            cuts = [xl[j]] + [c for c in sorted(set(breakpoints)) if xl[j] < c < xr[j]] + [xr[j]]
            cuts = np.array(cuts)
            parts = _gauss(f, cuts[:-1], cuts[1:]) * np.diff(cuts)
            out[j] = parts.sum() / (xr[j] - xl[j])
    return out


def _gauss(f, xl, xr):
    xl = np.asarray(xl, dtype=float)
    xr = np.asarray(xr, dtype=float)
    mid = 0.5 * (xl + xr)
    half = 0.5 * (xr - xl)
    acc = np.zeros_like(mid)
    for s, w in zip(_GL_NODES, _GL_WEIGHTS):
        acc = acc + w * np.asarray(f(mid + s * half), dtype=float)
    return 0.5 * acc


def steady_subcritical(problem: SteadyProblem, grid: Grid) -> SteadySolution:
    """Subcritical flow everywhere, head fixed by the outflow depth."""
    g, q0 = problem.g, problem.q0
    z_out = float(problem.bottom(problem.b))
    E = bernoulli_head(problem.h_out, q0, z_out, g)
    if q0 and problem.h_out <= critical_depth(q0, g):
        raise SteadyStateError("outflow depth is not subcritical")

    def profile(x):
        z = problem.bottom(x)
        if np.any(g * z > E - 1.5 * g * critical_depth(q0, g) * (1 + 1e-12)) and q0:
            raise SteadyStateError("flow becomes critical: not a subcritical problem")
        return bernoulli_roots(E, q0, z, g).subcritical

    bps = tuple(problem.breakpoints)
    h = gauss_cell_averages(profile, grid, bps)
    z = gauss_cell_averages(problem.bottom, grid, bps)
    return SteadySolution(h, np.full_like(h, q0), z, None, profile, problem.bottom)


def transcritical_shock_location(problem: SteadyProblem, tol: float = 1e-13) -> float:
    """Position where the supercritical branch from the crest jumps to the
    subcritical branch fixed by the outflow depth."""
    g, q0 = problem.g, problem.q0
    crest = problem.crest
    zc = float(problem.bottom(crest))
    Ec = critical_head(q0, zc, g)
    Eo = bernoulli_head(problem.h_out, q0, float(problem.bottom(problem.b)), g)

    def jump(x):
        z = problem.bottom(x)
        h_sup = bernoulli_roots(Ec, q0, z, g).supercritical
        h_sub = bernoulli_roots(Eo, q0, z, g).subcritical
        # positive where the supercritical stream carries more momentum
        return float(momentum_flux(h_sup, q0, g) - momentum_flux(h_sub, q0, g))

    # the outflow branch only exists where the bottom is low enough
    Bc = 1.5 * g * critical_depth(q0, g)
    z_max = (Eo - Bc) / g
    lo, hi = crest, problem.b
    if float(problem.bottom(lo)) > z_max:
        a, b = lo, hi
        while b - a > tol:
            m = 0.5 * (a + b)
            if float(problem.bottom(m)) > z_max:
                a = m
            else:
                b = m
        lo = b
    flo, fhi = jump(lo), jump(hi)
    if flo * fhi >= 0.0:
        raise SteadyStateError("the two branches do not bracket a steady shock")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = jump(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def steady_transcritical_shock(problem: SteadyProblem, grid: Grid) -> SteadySolution:
    """Critical flow at the crest, supercritical downstream up to a steady shock."""
    g, q0 = problem.g, problem.q0
    crest = problem.crest
    zc = float(problem.bottom(crest))
    Ec = critical_head(q0, zc, g)
    Eo = bernoulli_head(problem.h_out, q0, float(problem.bottom(problem.b)), g)
    xs = transcritical_shock_location(problem)

    def profile(x):
        x = np.asarray(x, dtype=float)
        z = np.asarray(problem.bottom(x), dtype=float)
        h = np.empty(np.shape(x))
        upstream = x <= crest
        shocked = x >= xs
        mid = ~upstream & ~shocked
        if upstream.any():
            h[upstream] = bernoulli_roots(Ec, q0, z[upstream], g).subcritical
        if mid.any():
            h[mid] = bernoulli_roots(Ec, q0, z[mid], g).supercritical
        if shocked.any():
            h[shocked] = bernoulli_roots(Eo, q0, z[shocked], g).subcritical
        return h

    bps = tuple(problem.breakpoints) + (crest, xs)
    h = gauss_cell_averages(profile, grid, bps)
    z = gauss_cell_averages(problem.bottom, grid, problem.breakpoints)
    return SteadySolution(h, np.full_like(h, q0), z, xs, profile, problem.bottom)
