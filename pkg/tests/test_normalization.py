import numpy as np
import pytest

from ssguard.calculations.normalization import grad_omega_sup, is_normalized, normalize_profile, vorticity_of


def test_grad_omega_sup_of_gaussian(gaussian_blob):
    assert grad_omega_sup(gaussian_blob) == pytest.approx(np.sqrt(2.0) * np.exp(-0.5), rel=1e-12)
    assert not is_normalized(gaussian_blob)


def test_normalization_reaches_unit_gradient(gaussian_blob):
    normalized, lam = normalize_profile(gaussian_blob)
    assert lam == pytest.approx(np.sqrt(2.0) * np.exp(-0.5), rel=1e-12)
    assert grad_omega_sup(normalized) == pytest.approx(1.0, rel=1e-10)
    assert is_normalized(normalized)


def test_normalized_profile_is_returned_unchanged(gaussian_blob):
    normalized, _ = normalize_profile(gaussian_blob)
    again, lam = normalize_profile(normalized)
    assert lam == 1.0
    assert again is normalized


def test_zero_vorticity_cannot_be_normalized(trivial):
    with pytest.raises(ValueError, match="vanishes identically"):
        normalize_profile(trivial)


def test_vorticity_falls_back_to_curl(gaussian_ring):
    profile = gaussian_ring.replace(Omega=None)
    points = np.array([[1.0, 0.0, 0.0], [0.3, -0.8, 0.2]])
    np.testing.assert_allclose(
        vorticity_of(profile).evaluate(points), gaussian_ring.Omega.evaluate(points), atol=1e-10
    )
