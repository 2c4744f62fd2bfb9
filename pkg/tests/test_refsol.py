import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbswe.grid import make_uniform
from wbswe.refsol import (SUBCRITICAL_BUMP, TRANSCRITICAL_SHOCK, ChokedFlowError, SteadyProblem,
                          SteadyStateError, bernoulli_head, bernoulli_roots, critical_depth,
                          critical_head, froude, gauss_cell_averages, momentum_flux,
                          steady_subcritical, steady_transcritical_shock,
                          transcritical_shock_location)

G = 9.81
SHOCK = 11.665504281554291


def test_roots_at_rest():
    r = bernoulli_roots(G * 1.5, 0.0, 0.5, G)
    assert r.subcritical == pytest.approx(1.0, rel=1e-15)
    assert np.isnan(r.supercritical)


def test_roots_critical_double_root():
    q0 = 0.18
    hc = critical_depth(q0, G)
    assert hc == pytest.approx((q0**2 / G) ** (1 / 3), rel=1e-15)
    r = bernoulli_roots(critical_head(q0, 0.1, G), q0, 0.1, G)
    assert r.subcritical == pytest.approx(hc, rel=1e-12)
    assert r.supercritical == pytest.approx(hc, rel=1e-12)


def test_roots_round_trip():
    E = bernoulli_head(0.33, 0.18, 0.0, G)
    r = bernoulli_roots(E, 0.18, 0.0, G)
    assert r.subcritical == pytest.approx(0.33, rel=1e-14)
    assert r.supercritical < critical_depth(0.18, G)


def test_choked_flow_rejected():
    with pytest.raises(ChokedFlowError):
        bernoulli_roots(0.5 * critical_head(0.18, 0.0, G), 0.18, 0.0, G)
    with pytest.raises(ChokedFlowError):
        bernoulli_roots(1.0, 0.0, 1.0, G)


@settings(max_examples=300, deadline=None)
@given(q0=st.floats(0.01, 10.0), z=st.floats(-1.0, 1.0), excess=st.floats(1e-6, 50.0))
def test_roots_residual_and_branches(q0, z, excess):
    E = critical_head(q0, z, G) + excess
    r = bernoulli_roots(E, q0, z, G)
    for h in (r.subcritical, r.supercritical):
        assert h > 0
        # relative to the size of the terms being cancelled
        scale = q0 * q0 / (2 * h * h) + G * (h + abs(z))
        assert abs(bernoulli_head(h, q0, z, G) - E) <= 1e-14 * scale
    assert froude(r.subcritical, q0, G) <= 1 + 1e-7
    assert froude(r.supercritical, q0, G) >= 1 - 1e-7


def test_shock_location():
    # the quoted position needs g = 9.812 (the package default); see the notes
    assert transcritical_shock_location(TRANSCRITICAL_SHOCK) == pytest.approx(SHOCK, abs=1e-6)


def test_transcritical_profile():
    sol = steady_transcritical_shock(TRANSCRITICAL_SHOCK, make_uniform(0, 25, 200))
    p = TRANSCRITICAL_SHOCK
    g, q0 = p.g, p.q0
    assert sol.profile(np.array([10.0]))[0] == pytest.approx(critical_depth(q0, g), rel=1e-12)
    xs = sol.shock_location
    up = sol.profile(np.array([xs - 1e-9]))[0]
    dn = sol.profile(np.array([xs + 1e-9]))[0]
    assert up < dn
    assert abs(momentum_flux(up, q0, g) - momentum_flux(dn, q0, g)) < 1e-7
    # matching residual at the returned position itself
    z = p.bottom(xs)
    h_sup = bernoulli_roots(critical_head(q0, 0.2, g), q0, z, g).supercritical
    h_sub = bernoulli_roots(bernoulli_head(p.h_out, q0, 0.0, g), q0, z, g).subcritical
    assert abs(momentum_flux(h_sup, q0, g) - momentum_flux(h_sub, q0, g)) < 1e-10
    np.testing.assert_array_equal(sol.q, q0)
    assert np.all(sol.h > 0)


def test_heads_constant_on_branches():
    p = TRANSCRITICAL_SHOCK
    sol = steady_transcritical_shock(p, make_uniform(0, 25, 10))
    xs = sol.shock_location
    for x, E in ((np.linspace(0.5, xs - 0.01, 200), critical_head(p.q0, 0.2, p.g)),
                 (np.linspace(xs + 0.01, 25, 200), bernoulli_head(p.h_out, p.q0, 0.0, p.g))):
        heads = bernoulli_head(sol.profile(x), p.q0, p.bottom(x), p.g)
        np.testing.assert_allclose(heads, E, rtol=1e-12)


def test_subcritical_profile():
    p = SUBCRITICAL_BUMP
    x = np.linspace(0, 25, 2001)
    sol = steady_subcritical(p, make_uniform(0, 25, 100))
    h = sol.profile(x)
    assert x[np.argmin(h)] == pytest.approx(12.5, abs=1e-9)
    assert np.all(froude(h, p.q0, p.g) < 1)
    np.testing.assert_allclose(bernoulli_head(h, p.q0, p.bottom(x), p.g),
                               bernoulli_head(p.h_out, p.q0, p.bottom(25.0), p.g), rtol=1e-13)


def test_subcritical_flat_bottom():
    p = SteadyProblem(q0=1.0, h_out=2.0, bottom=lambda x: np.zeros_like(np.asarray(x, float)))
    sol = steady_subcritical(p, make_uniform(0, 25, 50))
    np.testing.assert_allclose(sol.h, 2.0, rtol=1e-14)


def test_subcritical_rejects_critical_regime():
    p = SteadyProblem(q0=4.42, h_out=2.0, bottom=lambda x: 1.5 * np.exp(-(np.asarray(x) - 12.5) ** 2))
    with pytest.raises(SteadyStateError):
        steady_subcritical(p, make_uniform(0, 25, 50))


def test_problem_validation():
    with pytest.raises(ValueError):
        SteadyProblem(q0=-1.0, h_out=1.0)
    with pytest.raises(ValueError):
        SteadyProblem(q0=1.0, h_out=0.0)


def test_gauss_averages():
    grid = make_uniform(0, 1, 4)
    # exact for quintics
    f = lambda x: x**5
    a, b = grid.interfaces[:-1], grid.interfaces[1:]
    np.testing.assert_allclose(gauss_cell_averages(f, grid), (b**6 - a**6) / (6 * (b - a)), rtol=1e-14)
    # a kink inside a cell is split out
    k = lambda x: np.abs(np.asarray(x) - 0.3)
    exact = ((0.3 - 0.25) ** 2 + (0.5 - 0.3) ** 2) / 2 / 0.25
    assert gauss_cell_averages(k, grid, (0.3,))[1] == pytest.approx(exact, rel=1e-14)


def test_profile_csv(tmp_path):
    sol = steady_subcritical(SUBCRITICAL_BUMP, make_uniform(0, 25, 10))
    x = np.linspace(0, 25, 7)
    sol.to_csv(tmp_path / "p.csv", x)
    rows = np.genfromtxt(tmp_path / "p.csv", delimiter=",", names=True)
    np.testing.assert_allclose(rows["H"], rows["h"] + rows["z"], rtol=1e-15)
    np.testing.assert_array_equal(rows["q"], 4.42)
