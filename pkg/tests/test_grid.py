import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wbswe.grid import (Grid, GridError, locally_refined_map, make_grid, make_locally_refined,
                        make_quasi_regular, make_random, make_uniform, project_averages,
                        quasi_regular_map, refine)


def test_uniform_examples():
    g = make_uniform(0, 1, 4)
    np.testing.assert_array_equal(g.interfaces, [0, 0.25, 0.5, 0.75, 1])
    g = make_uniform(0, 2, 100)
    np.testing.assert_allclose(g.widths, 0.02, rtol=1e-13)
    g = make_uniform(-2, 2, 8)
    np.testing.assert_allclose(g.centers, np.arange(-1.75, 2, 0.5), atol=1e-15)


@pytest.mark.parametrize("args", [(1, 0, 4), (0, 1, 0), (0, 0, 3), (0, np.inf, 3), (0, 1, 2.5)])
def test_invalid_domains_rejected(args):
    with pytest.raises(GridError):
        make_uniform(*args)


def test_grid_rejects_unsorted_interfaces():
    with pytest.raises(GridError):
        Grid(np.array([0.0, 0.5, 0.5, 1.0]))
    with pytest.raises(GridError):
        Grid(np.array([0.0]))


def test_grid_is_read_only():
    g = make_uniform(0, 1, 4)
    with pytest.raises(ValueError):
        g.widths[0] = 1.0


def test_quasi_regular_endpoints_and_ratio():
    assert quasi_regular_map(0.0) == 0.0
    assert quasi_regular_map(1.0) == pytest.approx(1.0, abs=1e-15)
    g = make_quasi_regular(0, 1, 100)
    bound = (1 + np.pi / 5) / (1 - np.pi / 5)
    assert g.widths.max() / g.widths.min() <= bound
    assert bound == pytest.approx(4.381, abs=1e-3)


def test_random_grid_reproducible():
    assert make_random(0, 1, 50, seed=3) == make_random(0, 1, 50, seed=3)
    assert make_random(0, 1, 50, seed=3) != make_random(0, 1, 50, seed=4)


class _ZeroRng:
    def uniform(self, lo, hi, size):
        return np.zeros(size)


def test_random_grid_without_perturbation_is_uniform():
    g = make_random(0, 1, 16, rng=_ZeroRng())
    np.testing.assert_allclose(g.widths, 1 / 16, rtol=1e-13)


def test_refined_map_fixed_points_and_symmetry():
    for wc in (0.0, 0.3, 0.5, 1.0):
        assert locally_refined_map(0.0, wc) == 0.0
        assert locally_refined_map(1.0, wc) == 1.0
    g = make_locally_refined(0, 1, 64, 0.5)
    assert locally_refined_map(0.5, 0.5) == 0.5
    np.testing.assert_allclose(g.widths, g.widths[::-1], rtol=1e-12)
    assert np.argmin(g.widths) in (31, 32)


def test_refined_grid_for_shock_is_finest_near_shock():
    g = make_locally_refined(0, 25, 200, 11.665504281554291 / 25)
    j = np.argmin(g.widths)
    assert abs(g.centers[j] - 11.67) < 0.25


def test_refined_grid_rejects_bad_center():
    with pytest.raises(GridError):
        make_locally_refined(0, 1, 10, 1.5)


def test_make_grid_families_and_aliases():
    for fam in ("uniform", "quasi", "random", "refined", "quasi-regular", "adapted"):
        g = make_grid(fam, -1, 1, 20)
        assert g.n_cells == 20 and g.a == -1 and g.b == 1
    with pytest.raises(GridError):
        make_grid("hexagonal", 0, 1, 10)


def test_refine_is_nested():
    g = make_random(0, 1, 10, seed=1)
    f = refine(g, 4)
    assert f.n_cells == 40
    np.testing.assert_array_equal(f.interfaces[::4], g.interfaces)


def test_grid_csv(tmp_path):
    g = make_quasi_regular(0, 2, 5)
    g.to_csv(tmp_path / "g.csv")
    rows = np.genfromtxt(tmp_path / "g.csv", delimiter=",", names=True)
    np.testing.assert_array_equal(rows["x_left"], g.interfaces[:-1])
    np.testing.assert_array_equal(rows["width"], g.widths)


# ------------------------------------------------------------- projection

def test_projection_examples():
    fine = make_uniform(0, 1, 4)
    coarse = make_uniform(0, 1, 2)
    np.testing.assert_allclose(project_averages(fine, [1, 1, 3, 3], coarse), [1, 3], rtol=1e-14)
    v = np.arange(4.0)
    np.testing.assert_array_equal(project_averages(fine, v, fine), v)
    g = make_random(0, 1, 7, seed=2)
    np.testing.assert_allclose(project_averages(fine, np.full(4, 2.5), g), 2.5, rtol=1e-13)


def test_projection_domain_mismatch():
    with pytest.raises(GridError):
        project_averages(make_uniform(0, 1, 4), np.ones(4), make_uniform(0, 2, 4))


# ------------------------------------------------------------- properties

@settings(max_examples=60, deadline=None)
@given(N=st.integers(10, 100_000), seed=st.integers(0, 2**32 - 1))
def test_random_width_bounds(N, seed):
    g = make_random(0, 1, N, seed=seed)
    d = 1.0 / N
    assert g.widths.min() >= 0.75 * d * (1 - 1e-12)
    assert g.widths.max() <= 1.25 * d * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(N=st.integers(10, 100_000))
def test_quasi_regular_width_bounds(N):
    g = make_quasi_regular(0, 1, N)
    assert g.widths.min() >= (1 - np.pi / 5) / N * (1 - 1e-9)
    assert g.widths.max() <= (1 + np.pi / 5) / N * (1 + 1e-9)


@settings(max_examples=60, deadline=None)
@given(fam=st.sampled_from(["uniform", "quasi", "random", "refined"]),
       N=st.integers(1, 2000),
       a=st.floats(-100, 100), L=st.floats(1e-3, 100), wc=st.floats(0, 1))
def test_generator_invariants(fam, N, a, L, wc):
    g = make_grid(fam, a, a + L, N, w_c=wc)
    assert np.all(np.diff(g.interfaces) > 0)
    assert g.interfaces[0] == a and g.interfaces[-1] == a + L
    np.testing.assert_allclose(g.centers, 0.5 * (g.interfaces[:-1] + g.interfaces[1:]))
    assert abs(g.widths.sum() - L) <= 1e-13 * max(L, abs(a))


@settings(max_examples=60, deadline=None)
@given(ns=st.integers(2, 300), nt=st.integers(1, 300), seed=st.integers(0, 1000))
def test_projection_preserves_integral(ns, nt, seed):
    rng = np.random.default_rng(seed)
    src = make_random(-1, 2, ns, seed=seed)
    tgt = make_quasi_regular(-1, 2, nt)
    v = rng.normal(size=ns)
    w = project_averages(src, v, tgt)
    total = src.widths @ v
    assert abs(tgt.widths @ w - total) <= 1e-13 * max(1.0, src.widths @ np.abs(v))


def test_high_degree_projection_of_smooth_field():
    fine = make_uniform(0, 1, 4096)
    x = fine.interfaces
    w = 2 * np.pi
    v = (np.sin(w * x[1:]) - np.sin(w * x[:-1])) / (w * fine.widths)
    tgt = make_quasi_regular(0, 1, 800)
    xt = tgt.interfaces
    exact = (np.sin(w * xt[1:]) - np.sin(w * xt[:-1])) / (w * tgt.widths)
    err1 = np.abs(project_averages(fine, v, tgt) - exact).max()
    err5 = np.abs(project_averages(fine, v, tgt, degree=5) - exact).max()
    # cutting through fine cells costs O(d_fine^2 / d) with the linear primitive
    assert err1 > 1e-5 and err5 < 1e-11


@settings(max_examples=40, deadline=None)
@given(ns=st.integers(8, 200), nt=st.integers(1, 100), seed=st.integers(0, 1000),
       k=st.integers(1, 6))
def test_high_degree_projection_integral_and_nesting(ns, nt, seed, k):
    rng = np.random.default_rng(seed)
    src = make_random(0, 1, ns, seed=seed)
    v = rng.normal(size=ns)
    w = project_averages(src, v, make_quasi_regular(0, 1, nt), degree=5)
    assert abs(make_quasi_regular(0, 1, nt).widths @ w - src.widths @ v) <= 1e-12
    fine = refine(src, k)
    u = rng.normal(size=fine.n_cells)
    np.testing.assert_allclose(project_averages(fine, u, src, degree=5),
                               project_averages(fine, u, src), rtol=1e-11, atol=1e-12)
