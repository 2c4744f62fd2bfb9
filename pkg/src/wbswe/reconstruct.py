"""Non-oscillatory reconstruction of point values from cell averages.

Orders 1 to 4 on arbitrary positive cell widths:

* 1: piecewise constant
* 2: piecewise linear with MinMod-limited slopes
* 3: compact CWENO (two linears and a parabola on a 3-cell stencil)
* 4: WENO combination of three parabolas on a 5-cell stencil, fifth order at
  the interfaces and fourth order at the cell center

Kernels work on *windows*: sequences of arrays ``V[k]`` and ``w[k]`` holding
averages and widths of the k-th stencil cell, the central cell being
``k = 1`` (3 cells) or ``k = 2`` (5 cells). Every entry may be an array, so
a whole field is reconstructed in one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

ALPHA_CWENO = (0.25, 0.5, 0.25)  # (left linear, central parabola, right linear)


@dataclass(frozen=True)
class WenoParams:
    """Nonlinear-weight settings.

    ``cweno_is0`` selects the central smoothness indicator of CWENO3:
    ``"squared"`` squares the first-derivative term (the usual scaled
    square-derivative integral), ``"linear"`` keeps it unsquared.
    """

    epsilon: float = 1e-6
    cweno_is0: str = "squared"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.cweno_is0 not in ("squared", "linear"):
            raise ValueError(f"unknown cweno_is0 variant {self.cweno_is0!r}")


class CellTrace(NamedTuple):
    left: np.ndarray
    right: np.ndarray
    center: np.ndarray


def minmod_slope(sL, sR):
    sL = np.asarray(sL, dtype=float)
    sR = np.asarray(sR, dtype=float)
    s = np.where(np.abs(sL) < np.abs(sR), sL, sR)
    s = np.where(sL * sR > 0.0, s, 0.0)
    return s if s.ndim else float(s)


def _slopes(V, w):
    """Interface slopes between consecutive window cells."""
    return [(V[k + 1] - V[k]) / (0.5 * (w[k] + w[k + 1])) for k in range(len(V) - 1)]


def interp_parabola(V, w):
    """Parabola a + b s + c s^2 (s measured from the middle cell's center)
    whose averages over the three cells equal ``V``."""
    Vm, V0, Vp = V
    wm, w0, wp = w
    sm = (V0 - Vm) / (0.5 * (wm + w0))
    sp = (Vp - V0) / (0.5 * (w0 + wp))
    tot = wm + w0 + wp
    c = 1.5 * (sp - sm) / tot
    b = ((w0 + 2.0 * wm) * sp + (w0 + 2.0 * wp) * sm) / (2.0 * tot)
    a = V0 - c * w0 * w0 / 12.0
    return a, b, c


def _nonlinear(lin, IS, eps):
    wt = [d / (eps + s) ** 2 for d, s in zip(lin, IS)]
    tot = sum(wt)
    return [x / tot for x in wt]


def cweno3(V, w, params: WenoParams = WenoParams(), return_weights=False):
    """Compact third-order WENO on a 3-cell window.

    The same final parabola is evaluated at the left interface, the center and
    the right interface of the middle cell.
    """
    Vm, V0, Vp = (np.asarray(x, dtype=float) for x in V)
    wm, w0, wp = (np.asarray(x, dtype=float) for x in w)
    aL, a0, aR = ALPHA_CWENO
    sm = (V0 - Vm) / (0.5 * (wm + w0))
    sp = (Vp - V0) / (0.5 * (w0 + wp))
    tot = wm + w0 + wp
    c = 1.5 * (sp - sm) / tot
    b = ((w0 + 2.0 * wm) * sp + (w0 + 2.0 * wp) * sm) / (2.0 * tot)
    d2 = w0 * w0

    # central parabola P_C = (P_opt - aR P_R - aL P_L) / a0, stored as offsets from V0
    bc = b - aL * sm - aR * sp
    IS_L = d2 * sm * sm
    IS_R = d2 * sp * sp
    if params.cweno_is0 == "squared":
        IS_C = (bc * bc * d2 + 13.0 / 3.0 * c * c * d2 * d2) / (a0 * a0)
    else:
        IS_C = (bc * d2 + 13.0 / 3.0 * c * c * d2 * d2) / (a0 * a0)
    omL, om0, omR = _nonlinear((aL, a0, aR), (IS_L, IS_C, IS_R), params.epsilon)

    # P^2 - V0 = om0 (P_C - V0) + omL sm s + omR sp s
    c_c = c / a0
    b_c = bc / a0
    k_c = -c * d2 / 12.0 / a0
    slope = om0 * b_c + omL * sm + omR * sp
    const = om0 * k_c
    curv = om0 * c_c
    half = 0.5 * w0
    quad = curv * half * half
    left = V0 + (const - slope * half + quad)
    right = V0 + (const + slope * half + quad)
    center = V0 + const
    trace = CellTrace(left, right, center)
    if return_weights:
        return trace, np.stack([omL, om0, omR])
    return trace


def cweno3_polynomial(V, w, params: WenoParams = WenoParams()):
    """Coefficients (a, b, c) about the middle cell's center of the final CWENO parabola."""
    Vm, V0, Vp = (np.asarray(x, dtype=float) for x in V)
    wm, w0, wp = (np.asarray(x, dtype=float) for x in w)
    aL, a0, aR = ALPHA_CWENO
    _, (omL, om0, omR) = cweno3(V, w, params, return_weights=True)
    sm = (V0 - Vm) / (0.5 * (wm + w0))
    sp = (Vp - V0) / (0.5 * (w0 + wp))
    a, b, c = interp_parabola((Vm, V0, Vp), (wm, w0, wp))
    aC = (a - aL * V0 - aR * V0) / a0
    bC = (b - aL * sm - aR * sp) / a0
    cC = c / a0
    return (om0 * aC + (omL + omR) * V0,
            om0 * bC + omL * sm + omR * sp,
            om0 * cC)


def _sum(w, lo, hi):
    """Sum of window widths with offsets lo..hi (offset 0 is the central cell)."""
    return sum(w[k + 2] for k in range(lo, hi + 1))


def weno4_interface_weights(w):
    """Linear weights (d_-1, d_0, d_1) of the three parabolas at both interfaces.

    Returns ``(right, left)``: the weights reproducing the 5-cell quartic at
    x_{+1/2} and at x_{-1/2}. Parabola ``l`` uses cells l-1, l, l+1.
    """
    w = [np.asarray(x, dtype=float) for x in w]
    wm2, wm1, w0, w1, w2 = w
    s_all = _sum(w, -2, 2)
    s_m2_1 = _sum(w, -2, 1)
    s_m1_2 = _sum(w, -1, 2)
    s_0_2 = _sum(w, 0, 2)
    s_m2_0 = _sum(w, -2, 0)
    s_mid = s_m2_1 + s_m1_2

    right = (
        w1 * (w1 + w2) / (s_all * s_m2_1),
        s_m2_0 * (w1 + w2) * s_mid / (s_all * s_m1_2 * s_m2_1),
        s_m2_0 * (wm1 + w0) / (s_all * s_m1_2),
    )
    left = (
        s_0_2 * (w0 + w1) / (s_all * s_m2_1),
        s_0_2 * (wm2 + wm1) * s_mid / (s_all * s_m1_2 * s_m2_1),
        wm1 * (wm2 + wm1) / (s_all * s_m1_2),
    )
    return right, left


def weno4_center_weights(w):
    """Positive weights giving a fourth-order center value.

    They satisfy S(-2,1) d_-1 - S(-1,2) d_1 = w_1 - w_-1 and maximize the
    smallest weight.
    """
    w = [np.asarray(x, dtype=float) for x in w]
    wm2, wm1, w0, w1, w2 = w
    s_m2_1 = _sum(w, -2, 1)
    s_m1_2 = _sum(w, -1, 2)
    den = s_m2_1 + s_m1_2
    wider_right = w1 > wm1

    d1_a = 0.5 * (wm2 + 2.0 * wm1 + w0) / den
    dm1_a = (w1 - wm1 + d1_a * s_m1_2) / s_m2_1
    dm1_b = 0.5 * (w2 + 2.0 * w1 + w0) / den
    d1_b = (wm1 - w1 + dm1_b * s_m2_1) / s_m1_2

    dm1 = np.where(wider_right, dm1_a, dm1_b)
    d1 = np.where(wider_right, d1_a, d1_b)
    return dm1, 1.0 - dm1 - d1, d1


def _weno4_parabolas(V, w):
    """The three sub-parabolas, re-expanded about the central cell center, as
    offsets (a - V0, b, c)."""
    V = [np.asarray(x, dtype=float) for x in V]
    w = [np.asarray(x, dtype=float) for x in w]
    V0, w0 = V[2], w[2]
    out = []
    for l in (-1, 0, 1):
        a, b, c = interp_parabola(V[l + 1:l + 4], w[l + 1:l + 4])
        # center of the parabola's middle cell relative to x_0
        if l == -1:
            o = -0.5 * (w0 + w[1])
        elif l == 1:
            o = 0.5 * (w0 + w[3])
        else:
            o = 0.0
        # p(s) = a + b (s - o) + c (s - o)^2
        out.append(((a - V0) - b * o + c * o * o, b - 2.0 * c * o, c))
    return out


def weno4(V, w, params: WenoParams = WenoParams(), return_weights=False):
    V0 = np.asarray(V[2], dtype=float)
    w0 = np.asarray(w[2], dtype=float)
    polys = _weno4_parabolas(V, w)
    d2 = w0 * w0
    IS = [B * B * d2 + 13.0 / 3.0 * C * C * d2 * d2 for (_, B, C) in polys]
    lin_r, lin_l = weno4_interface_weights(w)
    lin_c = weno4_center_weights(w)
    eps = params.epsilon
    om_r = _nonlinear(lin_r, IS, eps)
    om_l = _nonlinear(lin_l, IS, eps)
    om_c = _nonlinear(lin_c, IS, eps)
    half = 0.5 * w0

    def at(om, s):
        return V0 + sum(o * (A + B * s + C * s * s) for o, (A, B, C) in zip(om, polys))

    trace = CellTrace(at(om_l, -half), at(om_r, half), at(om_c, 0.0))
    if return_weights:
        return trace, {"left": np.stack(om_l), "right": np.stack(om_r),
                       "center": np.stack(om_c)}
    return trace


def weno4_parabolas(V, w):
    """Sub-parabola coefficients (a, b, c) about the central cell center."""
    V0 = np.asarray(V[2], dtype=float)
    return [(V0 + A, B, C) for (A, B, C) in _weno4_parabolas(V, w)]


def reconstruct_padded(values, widths, order: int, params: WenoParams = WenoParams()) -> CellTrace:
    """Traces for every cell of a padded array except the two outermost per side.

    ``values`` and ``widths`` have length M; the result has length M - 4.
    """
    V = np.asarray(values, dtype=float)
    w = np.asarray(widths, dtype=float)
    M = V.shape[0]
    if M < 5:
        raise ValueError("need at least five cells including padding")
    win = [slice(k, M - 4 + k) for k in range(5)]
    if order == 1:
        c = V[win[2]].copy()
        return CellTrace(c, c.copy(), c.copy())
    if order == 2:
        V3 = [V[s] for s in win[1:4]]
        w3 = [w[s] for s in win[1:4]]
        sm, sp = _slopes(V3, w3)
        s = minmod_slope(sm, sp)
        half = 0.5 * s * w3[1]
        return CellTrace(V3[1] - half, V3[1] + half, V3[1].copy())
    if order == 3:
        return cweno3([V[s] for s in win[1:4]], [w[s] for s in win[1:4]], params)
    if order == 4:
        return weno4([V[s] for s in win], [w[s] for s in win], params)
    raise ValueError(f"reconstruction order must be 1..4, got {order}")
