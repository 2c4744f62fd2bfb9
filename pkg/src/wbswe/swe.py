"""Shallow-water physics: flux, wave speed, energy entropy pair.

Functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

G_DEFAULT = 9.812
SQRT2 = np.sqrt(2.0)


class NegativeDepthError(ValueError):
    """A water height below zero was produced or passed in."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


@dataclass(frozen=True)
class PhysConstants:
    g: float = G_DEFAULT
    eps_h: float = 1e-6

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if not self.eps_h > 0:
            raise ValueError("eps_h must be positive")


@dataclass(frozen=True)
class SweState:
    h: float
    q: float

    def __post_init__(self):
        if self.h < 0:
            raise NegativeDepthError(f"negative water height {self.h}")


def _check_depth(h):
    if np.any(np.asarray(h) < 0):
        raise NegativeDepthError("negative water height")


def desingularized_velocity(h, q, eps_h):
    """Velocity q/h, replaced below ``eps_h`` by a bounded rational form.

    The small-depth branch is sqrt(2) h q / sqrt(h^4 + max(h^4, eps_h^4)); it
    agrees with q/h at h = eps_h and tends to zero with h.
    """
    h = np.asarray(h, dtype=float)
    q = np.asarray(q, dtype=float)
    h4 = h**4
    safe = np.where(h >= eps_h, h, 1.0)
    regular = q / safe
    small = SQRT2 * h * q / np.sqrt(h4 + np.maximum(h4, eps_h**4))
    v = np.where(h >= eps_h, regular, small)
    return v if v.ndim else float(v)


def flux_hv(h, v, g):
    """Physical flux written with the velocity: (h v, h v^2 + g h^2 / 2)."""
    hv = h * v
    return hv, hv * v + 0.5 * g * h * h


def physical_flux(h, q, g=G_DEFAULT, eps_h=1e-12):
    _check_depth(h)
    v = desingularized_velocity(h, q, eps_h)
    _, f2 = flux_hv(np.asarray(h, dtype=float), v, g)
    return np.stack(np.broadcast_arrays(np.asarray(q, dtype=float), f2))


def max_wave_speed(h, q, g=G_DEFAULT, eps_h=1e-12):
    _check_depth(h)
    v = desingularized_velocity(h, q, eps_h)
    c = np.abs(v) + np.sqrt(g * np.asarray(h, dtype=float))
    return c if np.ndim(c) else float(c)


def entropy_hv(h, v, z, g):
    return 0.5 * (h * v * v + g * h * h) + g * h * z


def entropy_flux_hv(h, v, z, g):
    return (entropy_hv(h, v, z, g) + 0.5 * g * h * h) * v


def entropy(h, q, z, g=G_DEFAULT, eps_h=1e-12):
    """Total energy including the potential energy of the bottom."""
    _check_depth(h)
    v = desingularized_velocity(h, q, eps_h)
    return entropy_hv(np.asarray(h, dtype=float), v, z, g)


def entropy_flux(h, q, z, g=G_DEFAULT, eps_h=1e-12):
    _check_depth(h)
    v = desingularized_velocity(h, q, eps_h)
    return entropy_flux_hv(np.asarray(h, dtype=float), v, z, g)
