import numpy as np
import pytest

from ssguard.calculations.normalization import vorticity_of
from ssguard.calculations.norms import _power_law_tail, field_norm, quadrature_weights
from ssguard.classes import FieldSource, Grid3, MeridionalGrid, NormRequest
from ssguard.errors import DivergentTailError


def test_trapezoid_weights_sum_to_box_volume(small_grid):
    assert np.sum(quadrature_weights(small_grid)) == pytest.approx(4.0**3, rel=1e-13)


def test_meridional_weights_carry_the_cylinder_measure():
    grid = MeridionalGrid.spanning((0.0, 1.0), (0.0, 2.0), 41, 21)
    # volume of the cylinder r <= 1, 0 <= z <= 2 is 2 pi; the trapezoid rule is exact in r
    assert np.sum(quadrature_weights(grid)) == pytest.approx(2.0 * np.pi, rel=1e-12)


def test_gaussian_l2_norm(gaussian_blob):
    # |exp(-|y|^2)|_L2 = (pi / 2)^(3/4)
    estimate = field_norm(gaussian_blob.Omega, NormRequest.lp(2.0), gaussian_blob.grid)
    assert estimate.value == pytest.approx((np.pi / 2.0) ** 0.75, rel=1e-8)
    assert estimate.error >= 0.0


def test_sup_and_gradient_sup(gaussian_blob):
    sup = field_norm(gaussian_blob.Omega, NormRequest(kind="sup"), gaussian_blob.grid)
    assert sup.value == pytest.approx(1.0, abs=1e-14)
    grad = field_norm(gaussian_blob.Omega, NormRequest(kind="grad-sup"), gaussian_blob.grid)
    # attained on the node (1/2, 1/2, 0)
    assert grad.value == pytest.approx(np.sqrt(2.0) * np.exp(-0.5), rel=1e-12)


def test_holder_seminorm_of_linear_field():
    grid = Grid3.centered(9, 1.0)
    field = FieldSource(rank=1, name="linear", func=lambda p: 2.0 * p[..., 0])
    # 2 |dx| / d^(1/2) is largest for an x-aligned pair at distance L0
    estimate = field_norm(field, NormRequest.holder(mu=0.5, L0=1.0), grid)
    assert estimate.value == pytest.approx(2.0, rel=1e-12)
    assert estimate.num_pairs > 0


def test_holder_seminorm_of_first_coordinate_on_unit_box():
    grid = Grid3(dims=(11, 11, 11), spacing=(0.1, 0.1, 0.1), origin=(0.0, 0.0, 0.0))
    field = FieldSource(rank=1, name="y1", func=lambda p: p[..., 0])
    estimate = field_norm(field, NormRequest.holder(mu=0.5, L0=1.0), grid)
    assert estimate.value == pytest.approx(1.0, rel=1e-12)


def test_slowly_decaying_field_is_not_l2():
    grid = Grid3.centered(25, 8.0)
    field = FieldSource(rank=1, name="slow", func=lambda p: 1.0 / (1.0 + np.sum(p**2, axis=-1)) ** 0.5)
    with pytest.raises(DivergentTailError) as err:
        field_norm(field, NormRequest.lp(2.0), grid)
    # shell maxima are fitted against the outer shell radii, which steepens the slope a little
    assert 0.9 <= err.value.exponent <= 1.35
    assert 2.0 * err.value.exponent <= 3.0


def test_power_law_tail_survives_huge_amplitudes():
    # A R^-k = exp(-9) at R = 3, with log A = 382
    k = (382.0 + 9.0) / np.log(3.0)
    tail = _power_law_tail(382.0, k, 2.0, 3.0)
    assert tail == pytest.approx(4.0 * np.pi * np.exp(-18.0) * 27.0 / (2.0 * k - 3.0), rel=1e-9)
    assert _power_law_tail(0.0, 400.0, 2.0, 3.0) == 0.0


def test_lp_norm_of_fast_decaying_field_has_finite_error(gaussian_ring):
    estimate = field_norm(vorticity_of(gaussian_ring), NormRequest.lp(2.0), gaussian_ring.grid)
    assert np.isfinite(estimate.value)
    assert np.isfinite(estimate.error)
    assert 0.0 <= estimate.error <= estimate.value


def test_analytic_field_needs_a_grid():
    field = FieldSource(rank=1, name="one", func=lambda p: np.ones(p.shape[:-1]))
    with pytest.raises(ValueError):
        field_norm(field, NormRequest(kind="sup"))
