import numpy as np
import pytest

from ssguard.calculations.reconstruction import biot_savart, padded_grid, profile_consistency


def test_padded_grid_contains_the_box(small_grid):
    padded = padded_grid(small_grid, 2)
    assert padded.periodic
    assert padded.dims == (34, 34, 34)
    assert np.all(padded.lower <= small_grid.lower)
    assert np.all(padded.upper >= small_grid.upper)


def test_consistency_passes_for_exact_curls(trivial, gaussian_ring):
    assert profile_consistency(trivial).verdict == "PASS"
    entry = profile_consistency(gaussian_ring)
    assert entry.verdict == "PASS"
    assert entry.residual < 1e-10


def test_consistency_fails_for_unrelated_vorticity(gaussian_blob):
    entry = profile_consistency(gaussian_blob)
    assert entry.verdict == "FAIL"
    assert entry.residual == pytest.approx(1.0)


def test_biot_savart_recovers_ring_velocity(gaussian_ring):
    grid = gaussian_ring.grid
    velocity = biot_savart(gaussian_ring.Omega, grid)
    exact = gaussian_ring.U.values_on(grid)
    interior = grid.interior_mask(6)
    error = np.linalg.norm(velocity.values - exact, axis=-1)[interior].max()
    scale = np.linalg.norm(exact, axis=-1).max()
    assert error / scale < 5e-2


def test_biot_savart_needs_a_grid(gaussian_ring):
    with pytest.raises(ValueError):
        biot_savart(gaussian_ring.Omega)
