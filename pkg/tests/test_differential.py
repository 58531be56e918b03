import numpy as np
import pytest

from ssguard.calculations.differential import differential
from ssguard.classes import FieldSource, Grid3
from ssguard.errors import RankMismatchError
from ssguard.io import make_fixture


def test_closed_form_curl_of_rigid_rotation():
    profile = make_fixture("rigid-rotation", omega=1.5)
    curl = differential(profile.U, "curl")
    assert curl.is_analytic
    values = curl.evaluate(profile.grid.points())
    np.testing.assert_allclose(values[..., 2], 3.0, atol=1e-13)
    np.testing.assert_allclose(values[..., :2], 0.0, atol=1e-13)


def test_stencil_curl_of_sampled_linear_field():
    profile = make_fixture("rigid-rotation", omega=1.0)
    sampled = FieldSource.sampled(profile.U.values_on(profile.grid), profile.grid)
    curl = differential(sampled, "curl")
    assert not curl.is_analytic
    np.testing.assert_allclose(curl.values[..., 2], 2.0, atol=1e-10)


def test_divergence_of_sampled_column_is_small(gaussian_column):
    grid = gaussian_column.grid
    sampled = FieldSource.sampled(gaussian_column.U.values_on(grid), grid)
    div = differential(sampled, "divergence")
    interior = grid.interior_mask(3)
    assert np.max(np.abs(div.values[interior])) < 1e-2


def test_spectral_gradient_on_periodic_grid():
    grid = Grid3.centered(32, np.pi, boundary_policy="periodic")
    field = FieldSource.sampled(np.sin(grid.points()[..., 0]), grid)
    grad = differential(field, "gradient", method="spectral")
    np.testing.assert_allclose(grad.values[..., 0], np.cos(grid.points()[..., 0]), atol=1e-11)


def test_operator_rank_checks(gaussian_blob):
    with pytest.raises(RankMismatchError):
        differential(gaussian_blob.Omega, "gradient")
    with pytest.raises(ValueError):
        differential(gaussian_blob.Omega, "laplacian")
    with pytest.raises(ValueError):
        differential(gaussian_blob.Omega, "curl", method="spectral", grid=gaussian_blob.grid)
