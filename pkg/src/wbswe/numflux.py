"""Local Lax-Friedrichs flux and the numerical entropy flux built on the same viscosity."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .swe import desingularized_velocity, entropy_flux_hv, entropy_hv, flux_hv

ENTROPY_FLUX_VARIANTS = ("matched", "averaged")


class FluxResult(NamedTuple):
    F: np.ndarray  # shape (2, ...)
    alpha: np.ndarray


def llf_flux_hv(hL, vL, hR, vR, g) -> FluxResult:
    """LLF flux for states given as (height, velocity)."""
    qL = hL * vL
    qR = hR * vR
    f1L, f2L = flux_hv(hL, vL, g)
    f1R, f2R = flux_hv(hR, vR, g)
    alpha = np.maximum(np.abs(vL) + np.sqrt(g * hL), np.abs(vR) + np.sqrt(g * hR))
    F1 = 0.5 * (f1L + f1R) - 0.5 * alpha * (hR - hL)
    F2 = 0.5 * (f2L + f2R) - 0.5 * alpha * (qR - qL)
    return FluxResult(np.stack([F1, F2]), alpha)


def llf_flux(UL, UR, g, eps_h=1e-12) -> FluxResult:
    """LLF flux between conserved states ``UL = (h, q)`` and ``UR``."""
    hL, qL = (np.asarray(x, dtype=float) for x in UL)
    hR, qR = (np.asarray(x, dtype=float) for x in UR)
    if np.any(hL < 0) or np.any(hR < 0):
        raise ValueError("negative water height in flux evaluation")
    vL = desingularized_velocity(hL, qL, eps_h)
    vR = desingularized_velocity(hR, qR, eps_h)
    return llf_flux_hv(hL, vL, hR, vR, g)


def llf_entropy_flux_hv(hL, vL, zL, hR, vR, zR, alpha, g, variant="matched"):
    psiL = entropy_flux_hv(hL, vL, zL, g)
    psiR = entropy_flux_hv(hR, vR, zR, g)
    P = 0.5 * (psiL + psiR)
    if variant == "matched":
        P = P - 0.5 * alpha * (entropy_hv(hR, vR, zR, g) - entropy_hv(hL, vL, zL, g))
    elif variant != "averaged":
        raise ValueError(f"unknown entropy flux variant {variant!r}")
    return P


def llf_entropy_flux(UL, UR, zL, zR, alpha, g, eps_h=1e-12, variant="matched"):
    """Numerical entropy flux with the LLF viscosity ``alpha``.

    ``variant="averaged"`` drops the viscous term and returns the plain
    average of the exact entropy fluxes.
    """
    hL, qL = (np.asarray(x, dtype=float) for x in UL)
    hR, qR = (np.asarray(x, dtype=float) for x in UR)
    vL = desingularized_velocity(hL, qL, eps_h)
    vR = desingularized_velocity(hR, qR, eps_h)
    P = llf_entropy_flux_hv(hL, vL, zL, hR, vR, zR, alpha, g, variant)
    return P if np.ndim(P) else float(P)
