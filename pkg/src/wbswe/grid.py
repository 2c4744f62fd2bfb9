"""One-dimensional non-uniform grids.

All generators build interfaces on the reference interval [0, 1] and rescale
them affinely to [a, b].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Partition of [a, b] into N cells given by N + 1 ordered interfaces."""

    interfaces: np.ndarray

    def __post_init__(self):
        x = np.array(self.interfaces, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise GridError("a grid needs at least two interfaces")
        if not np.all(np.isfinite(x)):
            raise GridError("interfaces must be finite")
        if np.any(np.diff(x) <= 0.0):
            raise GridError("interfaces must be strictly increasing")
        x.setflags(write=False)
        object.__setattr__(self, "interfaces", x)
        centers = 0.5 * (x[:-1] + x[1:])
        widths = np.diff(x)
        centers.setflags(write=False)
        widths.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)

    @property
    def n_cells(self) -> int:
        return self.interfaces.size - 1

    @property
    def a(self) -> float:
        return float(self.interfaces[0])

    @property
    def b(self) -> float:
        return float(self.interfaces[-1])

    @property
    def length(self) -> float:
        return self.b - self.a

    def __len__(self):
        return self.n_cells

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.interfaces, other.interfaces)

    def __hash__(self):
        return hash(self.interfaces.tobytes())

    def to_csv(self, path) -> None:
        """Write one row per cell: index, left interface, center, right interface, width."""
        with open(Path(path), "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["j", "x_left", "x_center", "x_right", "width"])
            for j in range(self.n_cells):
                w.writerow([j, *(_fmt(v) for v in (
                    self.interfaces[j], self.centers[j],
                    self.interfaces[j + 1], self.widths[j]))])


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _check_domain(a, b, N):
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise GridError(f"invalid domain [{a}, {b}]")
    if int(N) != N or N < 1:
        raise GridError(f"invalid cell count {N}")


def _rescale(w: np.ndarray, a: float, b: float) -> np.ndarray:
    x = a + (b - a) * w
    # keep the domain endpoints exact
    x[0], x[-1] = a, b
    return x


def make_uniform(a: float, b: float, N: int) -> Grid:
    _check_domain(a, b, N)
    return Grid(_rescale(np.arange(N + 1) / N, a, b))


def quasi_regular_map(w):
    return w + 0.1 * np.sin(10.0 * np.pi * w) / 5.0


def make_quasi_regular(a: float, b: float, N: int) -> Grid:
    """Smoothly varying grid: image of the uniform reference grid under a sine map."""
    _check_domain(a, b, N)
    return Grid(_rescale(quasi_regular_map(np.arange(N + 1) / N), a, b))


def make_random(a: float, b: float, N: int, seed: int | None = 0,
                rng: np.random.Generator | None = None) -> Grid:
    """Uniform grid whose interior interfaces are moved by up to 1/8 of a cell.

    Perturbations come from ``numpy.random.default_rng(seed)`` (PCG64) unless a
    generator is passed in explicitly.
    """
    _check_domain(a, b, N)
    if rng is None:
        rng = np.random.default_rng(seed)
    delta = 1.0 / N
    xi = rng.uniform(-0.5, 0.5, size=N - 1)
    w = np.empty(N + 1)
    w[0], w[-1] = 0.0, 1.0
    w[1:-1] = np.arange(1, N) * delta + xi * delta / 4.0
    return Grid(_rescale(w, a, b))


def locally_refined_map(w, w_c: float):
    return w + 3.0 * w * (1.0 - w) * (w_c - w)


def make_locally_refined(a: float, b: float, N: int, w_c: float) -> Grid:
    """Grid with its smallest cells around the reference location ``w_c``.

    The cubic map is not monotone for every ``w_c``; a non-monotone image is
    rejected rather than silently reordered.
    """
    _check_domain(a, b, N)
    if not 0.0 <= w_c <= 1.0:
        raise GridError(f"w_c must lie in [0, 1], got {w_c}")
    w = locally_refined_map(np.arange(N + 1) / N, w_c)
    if np.any(np.diff(w) <= 0.0):
        raise GridError(f"refinement map is not monotone for w_c={w_c}")
    return Grid(_rescale(w, a, b))


GRID_FAMILIES = ("uniform", "quasi", "random", "refined")
_ALIASES = {"quasi-regular": "quasi", "locally-refined": "refined", "adapted": "refined"}


def make_grid(family: str, a: float, b: float, N: int, *, seed: int = 0,
              w_c: float = 0.5) -> Grid:
    family = _ALIASES.get(family, family)
    if family == "uniform":
        return make_uniform(a, b, N)
    if family == "quasi":
        return make_quasi_regular(a, b, N)
    if family == "random":
        return make_random(a, b, N, seed)
    if family == "refined":
        return make_locally_refined(a, b, N, w_c)
    raise GridError(f"unknown grid family {family!r}")


def refine(grid: Grid, factor: int) -> Grid:
    """Split every cell into ``factor`` equal sub-cells (a nested refinement)."""
    if factor < 1:
        raise GridError("refinement factor must be positive")
    x = grid.interfaces
    s = np.arange(factor) / factor
    fine = (x[:-1, None] + grid.widths[:, None] * s[None, :]).ravel()
    return Grid(np.append(fine, x[-1]))


def project_averages(source: Grid, values, target: Grid, degree: int = 1) -> np.ndarray:
    """Overlap-weighted averages of ``values`` on ``target`` cells.

    Works through the primitive of the source field, known exactly at the
    source interfaces. ``degree=1`` interpolates it linearly, which is exact
    for piecewise-constant data. For a smooth field sampled by a fine run a
    higher odd ``degree`` (local Lagrange interpolation on ``degree + 1``
    interfaces) removes the O(d_source^2 / d_target) error of cutting through
    source cells. The total integral is carried over up to rounding either way.
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] != source.n_cells:
        raise GridError("values do not match the source grid")
    tol = 1e-12 * max(source.length, target.length)
    if abs(source.a - target.a) > tol or abs(source.b - target.b) > tol:
        raise GridError("source and target grids cover different domains")
    if source == target:
        return values.copy()
    xs = source.interfaces - source.a
    xt = np.clip(target.interfaces - target.a, 0.0, xs[-1])
    xt[-1] = xs[-1]
    prim = np.concatenate([np.zeros((1,) + values.shape[1:]),
                           np.cumsum(values * _bcast(source.widths, values), axis=0)])
    if degree == 1 or source.n_cells <= degree:
        flat = prim.reshape(prim.shape[0], -1)
        pt = np.stack([np.interp(xt, xs, flat[:, k]) for k in range(flat.shape[1])], axis=1)
        pt = pt.reshape((xt.size,) + values.shape[1:])
    else:
        pt = _lagrange(xs, prim, xt, degree)
    return np.diff(pt, axis=0) / _bcast(np.diff(xt), values)


def _lagrange(xs, ys, xt, degree):
    n = degree + 1
    k = np.searchsorted(xs, xt) - n // 2
    k = np.clip(k, 0, xs.size - n)
    idx = k[:, None] + np.arange(n)[None, :]
    X = xs[idx]
    out = 0.0
    for i in range(n):
        w = np.ones(xt.size)
        for j in range(n):
            if j != i:
                # exactly 1 and 0 at the nodes, so nodal values pass through unchanged
                w = w * (xt - X[:, j]) / (X[:, i] - X[:, j])
        out = out + _bcast(w, ys) * ys[idx[:, i]]
    return out


def _bcast(w, values):
    return w.reshape((-1,) + (1,) * (values.ndim - 1))
