import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbswe.hydrostatic import (hydrostatic_correct, source_high, source_high_eq, source_order1,
                               source_order2, source_order2_eq)

G = 9.81
finite = dict(allow_nan=False, allow_infinity=False)


def test_correct_example():
    s = hydrostatic_correct(1.5, 1.5, 1.0, 0.7, 0.0, 0.0, 1e-6)
    assert s.z_star == pytest.approx(0.8, abs=1e-15)
    assert s.hL_hat == s.hR_hat
    assert s.hL_hat == pytest.approx(0.7, abs=1e-15)
    assert s.qL == 0.0 and s.qR == 0.0


def test_flat_bottom_leaves_states_alone():
    s = hydrostatic_correct(1.2, 0.4, 1.2, 0.4, 0.3, -0.1, 1e-6)
    assert s.hL_hat == 1.2 and s.hR_hat == 0.4
    assert s.qL == pytest.approx(0.3, rel=1e-15) and s.qR == pytest.approx(-0.1, rel=1e-15)


def test_dry_correction():
    # HL = 0.5 over zL = 0.2 next to a bottom at 0.8
    s = hydrostatic_correct(0.5, 1.0, 0.3, 0.2, 0.1, 0.0, 1e-6)
    assert s.z_star == pytest.approx(0.8)
    assert s.hL_hat == 0.0 and s.qL == 0.0


def test_order1_source_examples():
    assert source_order1(0.6, 0.6, G) == 0.0
    assert source_order1(0.7, 0.5, G) == pytest.approx(1.1772, rel=1e-13)
    assert source_order1(0.0, 0.0, G) == 0.0


def test_order2_source_examples():
    # constant bottom, no correction: every pair cancels
    assert source_order2(1.3, 1.3, 0.2, 0.8, 0.8, 0.2, G) == pytest.approx(0.0, abs=1e-14)
    # h = 1 and z linear with slope s over width d
    s, d, z0 = 0.3, 0.1, 0.05
    G2 = source_order2(1.0, 1.0, z0 + s * d / 2, 1.0, 1.0, z0 - s * d / 2, G)
    assert G2 == pytest.approx(-G * s * d, rel=1e-12)


def test_high_source_constant_bottom():
    assert source_high(0.9, 0.9, 0.1, 1.1, 1.1, 0.1, 1.0, 0.1, G) == pytest.approx(0.0, abs=1e-14)


def _exact_source(a, b):
    # cell integral of -g h z_x for h = 2 + sin x, z = cos x
    F = lambda x: -G * (2 * np.cos(x) - (x / 2 - np.sin(2 * x) / 4))
    return F(b) - F(a)


@pytest.mark.parametrize("high,rate", [(False, 3.0), (True, 5.0)])
def test_source_consistency_on_manufactured_cell(high, rate):
    h = lambda x: 2 + np.sin(x)
    z = lambda x: np.cos(x)
    x0 = 0.4
    errs = []
    for d in (0.2, 0.1, 0.05, 0.025):
        a, b = x0 - d / 2, x0 + d / 2
        if high:
            Gc = source_high(h(b), h(b), z(b), h(a), h(a), z(a), h(x0), z(x0), G)
        else:
            Gc = source_order2(h(b), h(b), z(b), h(a), h(a), z(a), G)
        errs.append(abs(Gc - _exact_source(a, b)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > rate - 0.1)


def test_equilibrium_forms_match_printed_forms():
    rng = np.random.default_rng(5)
    n = 10_000
    hl, hr, hc = rng.uniform(0.1, 3, (3, n))
    zl, zr, zc = rng.uniform(-1, 1, (3, n))
    al, ar = rng.uniform(0, 3, (2, n))
    a = source_order2(ar, hr, zr, al, hl, zl, G)
    b = source_order2_eq(ar, hr, hr + zr, al, hl, hl + zl, G)
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-11)
    a = source_high(ar, hr, zr, al, hl, zl, hc, zc, G)
    b = source_high_eq(ar, hr, hr + zr, al, hl, hl + zl, hc, hc + zc, G)
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-11)


def test_equilibrium_forms_vanish_at_rest():
    rng = np.random.default_rng(9)
    H = 1.5
    hl, hr, hc = rng.uniform(0.5, 1.5, (3, 1000))
    a = rng.uniform(0.5, 1.5, 1000)
    assert np.all(source_order2_eq(a, hr, H, a, hl, H, G) == 0.0)
    assert np.all(source_high_eq(a, hr, H, a, hl, H, hc, H, G) == 0.0)


@settings(max_examples=300, deadline=None)
@given(HL=st.floats(-2, 5, **finite), HR=st.floats(-2, 5, **finite),
       hL=st.floats(0, 5, **finite), hR=st.floats(0, 5, **finite),
       qL=st.floats(-5, 5, **finite), qR=st.floats(-5, 5, **finite))
def test_correction_positive(HL, HR, hL, hR, qL, qR):
    s = hydrostatic_correct(HL, HR, hL, hR, qL, qR, 1e-6)
    assert s.hL_hat >= 0.0 and s.hR_hat >= 0.0
    assert s.z_star >= HL - hL and s.z_star >= HR - hR


@settings(max_examples=300, deadline=None)
@given(H=st.floats(-5, 10, **finite), hL=st.floats(0, 10, **finite),
       hR=st.floats(0, 10, **finite))
def test_correction_continuous_at_rest(H, hL, hR):
    s = hydrostatic_correct(H, H, hL, hR, 0.0, 0.0, 1e-6)
    assert s.hL_hat == s.hR_hat
    assert s.qL == 0.0 and s.qR == 0.0
