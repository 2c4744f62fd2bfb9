"""Initial data and boundary setup for the test catalog.

Each builder returns a ``Problem``: domain, end time, boundary conditions and a
function producing cell averages on a given grid. Analytic data are averaged
with 3-point Gauss quadrature per cell, split at the kinks and jumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import Grid
from .integrator import Boundary, BoundarySpec, State
from .refsol import (SUBCRITICAL_BUMP, TRANSCRITICAL_SHOCK, SteadyProblem,
                     gauss_cell_averages, steady_subcritical, steady_transcritical_shock,
                     transcritical_shock_location)
from .swe import G_DEFAULT

# Random bottoms are rounded to multiples of this power of two, so that
# h = H - z is exact in floating point and h + z gives back H bit for bit.
DYADIC_STEP = 2.0**-40


@dataclass(frozen=True)
class Problem:
    name: str
    a: float
    b: float
    t_end: float
    bc: BoundarySpec
    initial: Callable[[Grid], State] = field(repr=False)
    epsilon: float = 1e-6           # WENO regularization suggested for the test
    w_c: float = 0.5                # center of the refined grid, in [0, 1]
    exact: Callable[[Grid], State] | None = field(default=None, repr=False)

    def initial_state(self, grid: Grid) -> State:
        if not (np.isclose(grid.a, self.a) and np.isclose(grid.b, self.b)):
            raise ValueError(f"grid [{grid.a}, {grid.b}] does not cover [{self.a}, {self.b}]")
        return self.initial(grid)


def _indicator_average(grid: Grid, lo: float, hi: float) -> np.ndarray:
    xl, xr = grid.interfaces[:-1], grid.interfaces[1:]
    overlap = np.clip(np.minimum(xr, hi) - np.maximum(xl, lo), 0.0, None)
    return overlap / grid.widths


def snap_dyadic(z, step: float = DYADIC_STEP) -> np.ndarray:
    return np.round(np.asarray(z, dtype=float) / step) * step


# ----------------------------------------------------------------- smooth flow

def shu_bottom(x):
    return np.sin(np.pi * x) ** 2


def smooth_periodic(g: float = G_DEFAULT, t_end: float = 0.1) -> Problem:
    """Smooth periodic flow over a sin^2 bottom; stays smooth up to t = 0.1."""

    def initial(grid):
        z = gauss_cell_averages(shu_bottom, grid)
        h = gauss_cell_averages(lambda x: 5.0 + np.exp(np.cos(2 * np.pi * x)), grid)
        q = gauss_cell_averages(lambda x: np.sin(np.cos(2 * np.pi * x)), grid)
        return State(h, q, z)

    return Problem("convergence", 0.0, 1.0, t_end, BoundarySpec.make_periodic(), initial)


# --------------------------------------------------------------- lake at rest

def lake_at_rest_random(H: float = 1.5, seed: int = 0, t_end: float = 1.0) -> Problem:
    """Still water over a bottom drawn cell by cell from U(0, 1)."""

    def initial(grid):
        rng = np.random.default_rng(seed)
        z = snap_dyadic(rng.uniform(0.0, 1.0, grid.n_cells))
        h = H - z
        return State(h, np.zeros_like(h), z)

    return Problem("wb-random", 0.0, 1.0, t_end, BoundarySpec.make_free(), initial)


# ---------------------------------------------------------- small perturbation

def pulse_bottom(x):
    x = np.asarray(x, dtype=float)
    bump = 0.25 * (1.0 + np.cos(10.0 * np.pi * (x - 0.5)))
    return np.where((x >= 1.2) & (x <= 1.4), bump, 0.0)


PULSE_AMPLITUDE = 1e-3


def small_pulse(amplitude: float = PULSE_AMPLITUDE, t_end: float = 0.2) -> Problem:
    """Small raised block of water next to a smooth bump, lake at rest elsewhere."""

    def initial(grid):
        z = gauss_cell_averages(pulse_bottom, grid, (1.2, 1.4))
        H = 1.0 + amplitude * _indicator_average(grid, 1.1, 1.2)
        h = H - z
        return State(h, np.zeros_like(h), z)

    return Problem("pulse", 0.0, 2.0, t_end, BoundarySpec.make_free(), initial,
                   epsilon=1e-12)


# -------------------------------------------------------------- steady flows

def _steady(problem: SteadyProblem, solver, name, t_end, bc, w_c) -> Problem:
    def exact(grid):
        sol = solver(problem, grid)
        return State(sol.h, sol.q, sol.z)

    return Problem(name, problem.a, problem.b, t_end, bc, exact, w_c=w_c, exact=exact)


def transcritical(problem: SteadyProblem = TRANSCRITICAL_SHOCK, t_end: float = 50.0) -> Problem:
    bc = BoundarySpec(Boundary("dirichlet", q=problem.q0), Boundary("dirichlet", h=problem.h_out))
    xs = transcritical_shock_location(problem)
    w_c = (xs - problem.a) / (problem.b - problem.a)
    return _steady(problem, steady_transcritical_shock, "transcritical", t_end, bc, w_c)


def subcritical(problem: SteadyProblem = SUBCRITICAL_BUMP, t_end: float = 10.0) -> Problem:
    bc = BoundarySpec(Boundary("dirichlet", q=problem.q0), Boundary("dirichlet", h=problem.h_out))
    w_c = (problem.crest - problem.a) / (problem.b - problem.a)
    return _steady(problem, steady_subcritical, "subcritical", t_end, bc, w_c)


# ------------------------------------------------------------------- shocks

def two_shocks(background: float = 1.0, t_end: float = 0.2) -> Problem:
    """Gaussian hump of water at rest on a flat bottom; it splits into two waves
    that steepen into shocks. ``background`` is the depth under the hump;
    with 0 the surroundings are practically dry and the fronts are rarefactions."""

    def initial(grid):
        h = gauss_cell_averages(lambda x: background + np.exp(-50.0 * x * x), grid)
        z = np.zeros_like(h)
        return State(h, np.zeros_like(h), z)

    return Problem("two-shocks", -2.0, 2.0, t_end, BoundarySpec.make_free(), initial)


def sin_canal_bottom(x):
    x = np.asarray(x, dtype=float)
    return np.where((x >= 0.0) & (x <= 1.0), np.sin(10.0 * np.pi * x) * x * (1.0 - x), 0.0)


def sin_canal(g: float = G_DEFAULT, t_end: float = 0.4) -> Problem:
    """Riemann problem running over a wavy stretch of river bed."""
    q_left = 0.5 * np.sqrt(1.5 * g)

    def initial(grid):
        z = gauss_cell_averages(sin_canal_bottom, grid, (0.0, 1.0))
        H = gauss_cell_averages(lambda x: np.where(x < -0.2, 1.0, 0.5), grid, (-0.2,))
        q = gauss_cell_averages(lambda x: np.where(x < -0.2, q_left, 0.0), grid, (-0.2,))
        return State(H - z, q, z)

    return Problem("sin-canal", -0.5, 1.5, t_end, BoundarySpec.make_free(), initial)


CATALOG = {
    "convergence": smooth_periodic,
    "wb-random": lake_at_rest_random,
    "pulse": small_pulse,
    "transcritical": transcritical,
    "subcritical": subcritical,
    "two-shocks": two_shocks,
    "sin-canal": sin_canal,
}
