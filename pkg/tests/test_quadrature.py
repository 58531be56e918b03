import numpy as np
import pytest

from ssguard.calculations.quadrature import (
    composite_gauss,
    cutoff,
    fibonacci_sphere,
    gauss_legendre,
    geometric_edges,
    half_circle_directions,
    sphere_rule,
)


def test_gauss_legendre_integrates_polynomials_exactly():
    x, w = gauss_legendre(5, 0.0, 2.0)
    assert np.sum(w * x**9) == pytest.approx(2.0**10 / 10, rel=1e-13)


def test_composite_gauss_matches_exponential_integral():
    x, w = composite_gauss(np.linspace(0.0, 3.0, 7), 6)
    assert np.sum(w * np.exp(-x)) == pytest.approx(1.0 - np.exp(-3.0), rel=1e-13)


def test_geometric_edges_grade_toward_zero():
    edges = geometric_edges(0.0, 1.0, 4)
    assert edges[0] == 0.0
    assert edges[-1] == 1.0
    np.testing.assert_allclose(edges[1:], [0.125, 0.25, 0.5, 1.0])


def test_geometric_edges_need_a_panel():
    with pytest.raises(ValueError):
        geometric_edges(0.1, 1.0, 0)


def test_sphere_rule_weights_and_second_moments():
    dirs, w = sphere_rule(12, 24)
    assert np.sum(w) == pytest.approx(4.0 * np.pi, rel=1e-13)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=-1), 1.0, atol=1e-14)
    # int x_i x_j dS = 4 pi / 3 delta_ij
    moments = np.einsum("k,ki,kj->ij", w, dirs, dirs)
    np.testing.assert_allclose(moments, 4.0 * np.pi / 3.0 * np.eye(3), atol=1e-12)


def test_fibonacci_sphere_units_and_axes():
    dirs = fibonacci_sphere(50)
    assert dirs.shape == (56, 3)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=-1), 1.0, atol=1e-14)
    assert fibonacci_sphere(50, include_axes=False).shape == (50, 3)


def test_half_circle_directions_stay_in_half_plane():
    dirs = half_circle_directions(9)
    assert np.all(dirs[:, 0] >= -1e-15)
    np.testing.assert_allclose(dirs[[0, -1]], [[0.0, 1.0], [0.0, -1.0]], atol=1e-15)


def test_cutoff_is_monotone_bridge():
    s = np.linspace(0.0, 3.0, 301)
    values = cutoff(s)
    assert np.all(values[s <= 1.0] == 1.0)
    assert np.all(values[s >= 2.0] == 0.0)
    assert np.all(np.diff(values) <= 0.0)
    assert cutoff(1.5) == pytest.approx(0.5)
