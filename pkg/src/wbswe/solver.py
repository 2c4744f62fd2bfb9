"""Time loop: CFL steps up to an end time, with optional entropy tracking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .entropy import EntropyField, entropy_cell_average, entropy_production
from .grid import Grid
from .integrator import Scheme, State, StepRecord, cfl_timestep, rk_step


@dataclass
class RunResult:
    state: State
    n_steps: int
    entropy: EntropyField | None
    hhat_min: float
    record: StepRecord | None


def solve(state: State, grid: Grid, scheme: Scheme, t_end: float, cfl: float = 0.45,
          *, track_entropy: bool = False, max_steps: int | None = None,
          n_steps: int | None = None, dt: float | None = None,
          callback: Callable[[State, StepRecord, EntropyField | None], None] | None = None,
          ) -> RunResult:
    """Advance ``state`` to ``t_end`` (or for ``n_steps`` steps).

    The time step follows the CFL condition unless ``dt`` is fixed. CFL steps
    are shrunk so that the time left is covered by equal steps, which lands on
    ``t_end`` without a tiny final step; a fixed ``dt`` is clipped instead. With ``track_entropy`` the entropy
    production of every step is computed and the last one is returned.
    """
    cur = state.copy()
    eta = entropy_cell_average(cur, grid, scheme) if track_entropy else None
    ent = None
    rec = None
    hmin = np.inf
    steps = 0
    while True:
        if n_steps is not None:
            if steps >= n_steps:
                break
        elif cur.t >= t_end * (1 - 1e-14):
            break
        if max_steps is not None and steps >= max_steps:
            raise RuntimeError(f"step limit {max_steps} reached at t={cur.t}")
        k = dt if dt is not None else cfl_timestep(cur.h, cur.q, grid, cfl, scheme.g, scheme.eps_h)
        if n_steps is None:
            left = t_end - cur.t
            if dt is None:
                # spread what is left over equal steps instead of ending on a sliver
                k = left / np.ceil(left / k * (1.0 - 1e-12))
            else:
                k = min(k, left)
        nxt, rec = rk_step(cur, k, grid, scheme)
        if n_steps is None and abs(nxt.t - t_end) <= 1e-14 * max(1.0, t_end):
            nxt.t = t_end
        hmin = min(hmin, rec.hhat_min)
        if track_entropy:
            eta_new = entropy_cell_average(nxt, grid, scheme)
            ent = entropy_production(rec, eta, eta_new, grid, scheme, nxt.t)
            eta = eta_new
        cur = nxt
        steps += 1
        if callback is not None:
            callback(cur, rec, ent)
    return RunResult(cur, steps, ent, hmin, rec)
