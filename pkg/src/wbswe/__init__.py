"""Well-balanced high-order finite volumes for shallow water on non-uniform grids."""

from .grid import (Grid, GridError, make_grid, make_locally_refined, make_quasi_regular,
                   make_random, make_uniform, project_averages)
from .integrator import Boundary, BoundarySpec, Scheme, State, cfl_timestep, rk_step
from .reconstruct import WenoParams
from .solver import RunResult, solve
from .swe import NegativeDepthError, PhysConstants

__all__ = [
    "Boundary", "BoundarySpec", "Grid", "GridError", "NegativeDepthError", "PhysConstants",
    "RunResult", "Scheme", "State", "WenoParams", "cfl_timestep", "make_grid",
    "make_locally_refined", "make_quasi_regular", "make_random", "make_uniform",
    "project_averages", "rk_step", "solve",
]
