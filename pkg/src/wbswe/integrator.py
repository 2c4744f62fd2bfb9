"""Semidiscrete well-balanced scheme and explicit Runge-Kutta stepping.

A state holds cell averages of h and q plus the time-invariant bottom
averages z. Each right-hand-side evaluation runs

    ghost fill -> reconstruct (H = h + z, q, h) -> hydrostatic correction
    -> LLF fluxes -> source quadrature -> flux balance

and also returns the interface fluxes and numerical entropy fluxes, which the
entropy indicator needs stage by stage.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .grid import Grid
from .hydrostatic import hydrostatic_correct, source_high_eq, source_order1, source_order2_eq
from .numflux import ENTROPY_FLUX_VARIANTS, llf_entropy_flux_hv, llf_flux_hv
from .reconstruct import CellTrace, WenoParams, reconstruct_padded
from .swe import G_DEFAULT, NegativeDepthError, desingularized_velocity

N_GHOST = 3  # order 4 needs a full 5-cell stencil in the first ghost cell


# ---------------------------------------------------------------- boundaries

BC_KINDS = ("periodic", "free", "dirichlet")


@dataclass(frozen=True)
class Boundary:
    """One side of the domain. For ``dirichlet`` give ``h`` and/or ``q``."""

    kind: str = "free"
    h: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.kind not in BC_KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "dirichlet" and self.h is None and self.q is None:
            raise ValueError("dirichlet boundary needs h or q")


@dataclass(frozen=True)
class BoundarySpec:
    left: Boundary = Boundary()
    right: Boundary = Boundary()

    def __post_init__(self):
        if (self.left.kind == "periodic") != (self.right.kind == "periodic"):
            raise ValueError("periodic boundaries must be set on both sides")

    @property
    def periodic(self) -> bool:
        return self.left.kind == "periodic"

    @classmethod
    def make_periodic(cls):
        return cls(Boundary("periodic"), Boundary("periodic"))

    @classmethod
    def make_free(cls):
        return cls(Boundary("free"), Boundary("free"))


def pad(values, n_ghost: int, periodic: bool) -> np.ndarray:
    """Extend along axis 0 by wrapping (periodic) or repeating the edge cells."""
    values = np.asarray(values)
    if periodic:
        if n_ghost > values.shape[0]:
            raise ValueError("not enough cells for periodic ghosts")
        return np.concatenate([values[-n_ghost:], values, values[:n_ghost]])
    return np.concatenate([np.repeat(values[:1], n_ghost, axis=0), values,
                           np.repeat(values[-1:], n_ghost, axis=0)])


def fill_ghosts(h, q, z, grid: Grid, bc: BoundarySpec, n_ghost: int = 2):
    """Return (h, q, z, widths) extended by ``n_ghost`` cells per side.

    Periodic ghosts wrap around; free-flow ghosts copy the nearest interior
    cell; dirichlet ghosts take the prescribed value(s) and copy the rest.
    """
    p = bc.periodic
    he, qe, ze, we = (pad(a, n_ghost, p) for a in (h, q, z, grid.widths))
    for side, sl in ((bc.left, slice(0, n_ghost)), (bc.right, slice(-n_ghost, None))):
        if side.kind == "dirichlet":
            if side.h is not None:
                he[sl] = side.h
            if side.q is not None:
                qe[sl] = side.q
    return he, qe, ze, we


# ------------------------------------------------------------------- scheme

@dataclass(frozen=True)
class Scheme:
    order: int = 2
    g: float = G_DEFAULT
    eps_h: float = 1e-6
    weno: WenoParams = field(default_factory=WenoParams)
    bc: BoundarySpec = field(default_factory=BoundarySpec.make_periodic)
    entropy_flux: str = "matched"
    # "corrected": entropy flux from hydrostatic states and z*, "raw": from plain traces
    entropy_states: str = "corrected"

    def __post_init__(self):
        if self.order not in (1, 2, 3, 4):
            raise ValueError(f"order must be 1..4, got {self.order}")
        if self.entropy_flux not in ENTROPY_FLUX_VARIANTS:
            raise ValueError(f"unknown entropy flux {self.entropy_flux!r}")
        if self.entropy_states not in ("corrected", "raw"):
            raise ValueError(f"unknown entropy states {self.entropy_states!r}")
        if not self.g > 0 or not self.eps_h > 0:
            raise ValueError("g and eps_h must be positive")

    def with_(self, **kw) -> "Scheme":
        return replace(self, **kw)


@dataclass
class State:
    h: np.ndarray
    q: np.ndarray
    z: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.h = np.array(self.h, dtype=float)
        self.q = np.array(self.q, dtype=float)
        self.z = np.array(self.z, dtype=float)
        if not self.h.shape == self.q.shape == self.z.shape:
            raise ValueError("h, q, z must have the same shape")

    @property
    def H(self) -> np.ndarray:
        return self.h + self.z

    def copy(self) -> "State":
        return State(self.h.copy(), self.q.copy(), self.z.copy(), self.t)

    def mass(self, grid: Grid) -> float:
        return float(np.sum(grid.widths * self.h))

    def to_csv(self, path, grid: Grid) -> None:
        """Snapshot: one row per cell with x, width, h, q, z, H."""
        with open(Path(path), "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "width", "h", "q", "z", "H"])
            for row in zip(grid.centers, grid.widths, self.h, self.q, self.z, self.H):
                w.writerow([f"{v:.17g}" for v in row])


def check_depth(h, what="state"):
    bad = np.flatnonzero(~(h >= 0.0))
    if bad.size:
        j = int(bad[0])
        raise NegativeDepthError(
            f"negative or invalid water height {h[j]!r} in cell {j} ({what}); "
            "the time step is probably too large", index=j)


class Traces(NamedTuple):
    """Reconstructed point values of (H, q, h) for cells -1..N (last axis: H, q, h)."""

    left: np.ndarray
    right: np.ndarray
    center: np.ndarray


def reconstruct_state(h, q, z, grid: Grid, scheme: Scheme) -> Traces:
    he, qe, ze, we = fill_ghosts(h, q, z, grid, scheme.bc, N_GHOST)
    V = np.stack([he + ze, qe, he], axis=1)
    tr = reconstruct_padded(V, we[:, None], scheme.order, scheme.weno)
    return Traces(tr.left, tr.right, tr.center)


class RhsResult(NamedTuple):
    dU: np.ndarray      # (2, N)
    F: np.ndarray       # (2, N + 1) interface fluxes
    P: np.ndarray       # (N + 1,) numerical entropy fluxes
    hhat_min: float


def semidiscrete_rhs(h, q, z, grid: Grid, scheme: Scheme) -> RhsResult:
    check_depth(h, "rhs input")
    g = scheme.g
    tr = reconstruct_state(h, q, z, grid, scheme)
    # traces cover cells -1..N: interface k sits between cells k-1 and k
    mL, pR = tr.right[:-1], tr.left[1:]
    st = hydrostatic_correct(mL[:, 0], pR[:, 0], mL[:, 2], pR[:, 2], mL[:, 1], pR[:, 1],
                             scheme.eps_h)
    flux = llf_flux_hv(st.hL_hat, st.vL, st.hR_hat, st.vR, g)
    F = flux.F

    if scheme.entropy_states == "corrected":
        P = llf_entropy_flux_hv(st.hL_hat, st.vL, st.z_star, st.hR_hat, st.vR, st.z_star,
                                flux.alpha, g, scheme.entropy_flux)
    else:
        hL, hR = np.maximum(mL[:, 2], 0.0), np.maximum(pR[:, 2], 0.0)
        vL = desingularized_velocity(hL, mL[:, 1], scheme.eps_h)
        vR = desingularized_velocity(hR, pR[:, 1], scheme.eps_h)
        P = llf_entropy_flux_hv(hL, vL, mL[:, 0] - mL[:, 2], hR, vR, pR[:, 0] - pR[:, 2],
                                flux.alpha, g, scheme.entropy_flux)

    # per-cell data for cells 0..N-1
    cell = slice(1, -1)
    hhat_r = st.hL_hat[1:]      # at x_{j+1/2}, from inside cell j
    hhat_l = st.hR_hat[:-1]     # at x_{j-1/2}, from inside cell j
    if scheme.order == 1:
        G = source_order1(hhat_r, hhat_l, g)
    else:
        Hl, hl = tr.left[cell, 0], tr.left[cell, 2]
        Hr, hr = tr.right[cell, 0], tr.right[cell, 2]
        if scheme.order == 2:
            G = source_order2_eq(hhat_r, hr, Hr, hhat_l, hl, Hl, g)
        else:
            Hc, hc = tr.center[cell, 0], tr.center[cell, 2]
            G = source_high_eq(hhat_r, hr, Hr, hhat_l, hl, Hl, hc, Hc, g)

    dF = F[:, 1:] - F[:, :-1]
    dU = np.empty_like(dF)
    dU[0] = -dF[0] / grid.widths
    dU[1] = -(dF[1] - G) / grid.widths
    hmin = float(min(st.hL_hat.min(), st.hR_hat.min()))
    return RhsResult(dU, F, P, hmin)


# ------------------------------------------------------------- time stepping

@dataclass(frozen=True)
class ButcherTableau:
    A: np.ndarray
    b: np.ndarray
    name: str = ""

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float)
        if A.shape != (b.size, b.size):
            raise ValueError("tableau A must be s x s with s = len(b)")
        if np.any(np.triu(A) != 0.0):
            raise ValueError("tableau must be explicit (strictly lower triangular)")
        if abs(b.sum() - 1.0) > 1e-14:
            raise ValueError("tableau weights must sum to 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def s(self) -> int:
        return self.b.size


EULER = ButcherTableau([[0.0]], [1.0], "euler")
SSPRK2 = ButcherTableau([[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5], "ssprk2")
SSPRK3 = ButcherTableau([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.25, 0.25, 0.0]],
                        [1 / 6, 1 / 6, 2 / 3], "ssprk3")
RK4 = ButcherTableau([[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0]],
                     [1 / 6, 1 / 3, 1 / 3, 1 / 6], "rk4")
TABLEAUX = {1: EULER, 2: SSPRK2, 3: SSPRK3, 4: RK4}


def tableau_for(order: int) -> ButcherTableau:
    return TABLEAUX[order]


@dataclass
class StepRecord:
    dt: float
    tableau: ButcherTableau
    fluxes: list = field(default_factory=list)          # per stage, (2, N + 1)
    entropy_fluxes: list = field(default_factory=list)  # per stage, (N + 1,)
    stages: list = field(default_factory=list)          # per stage, (h, q)
    hhat_min: float = np.inf

    def weighted_flux(self) -> np.ndarray:
        return sum(b * F for b, F in zip(self.tableau.b, self.fluxes))

    def weighted_entropy_flux(self) -> np.ndarray:
        return sum(b * P for b, P in zip(self.tableau.b, self.entropy_fluxes))


def cfl_timestep(h, q, grid: Grid, cfl: float = 0.45, g: float = G_DEFAULT,
                 eps_h: float = 1e-6) -> float:
    if not 0.0 < cfl <= 1.0:
        raise ValueError("cfl number must lie in (0, 1]")
    h = np.asarray(h, dtype=float)
    check_depth(h)
    v = desingularized_velocity(h, q, eps_h)
    smax = float(np.max(np.abs(v) + np.sqrt(g * h)))
    if not smax > 0.0:
        raise ValueError("no finite wave speed (state is dry and at rest)")
    return cfl * float(grid.widths.min()) / smax


def rk_step(state: State, dt: float, grid: Grid, scheme: Scheme,
            tableau: ButcherTableau | None = None) -> tuple[State, StepRecord]:
    if not dt > 0:
        raise ValueError("time step must be positive")
    tab = tableau or tableau_for(scheme.order)
    rec = StepRecord(dt, tab)
    U0 = np.stack([state.h, state.q])
    K = []
    for i in range(tab.s):
        U = U0.copy()
        for k in range(i):
            if tab.A[i, k] != 0.0:
                U += dt * tab.A[i, k] * K[k]
        if i:
            check_depth(U[0], f"stage {i + 1}")
        r = semidiscrete_rhs(U[0], U[1], state.z, grid, scheme)
        K.append(r.dU)
        rec.fluxes.append(r.F)
        rec.entropy_fluxes.append(r.P)
        rec.stages.append((U[0], U[1]))
        rec.hhat_min = min(rec.hhat_min, r.hhat_min)
    U1 = U0.copy()
    for b, Ki in zip(tab.b, K):
        U1 += dt * b * Ki
    check_depth(U1[0], "step result")
    return State(U1[0], U1[1], state.z, state.t + dt), rec
