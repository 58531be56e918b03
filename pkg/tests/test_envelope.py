import numpy as np
import pytest

from ssguard.calculations.envelope import decay_envelope, fit_tail, shell_maxima
from ssguard.errors import EnvelopeViolationError
from ssguard.io import make_fixture


def test_shell_maxima_groups_by_radius():
    radii = np.array([0.1, 0.4, 0.6, 0.9, 1.0])
    shells = shell_maxima(np.array([1.0, 5.0, 2.0, 3.0, 0.5]), radii, 2)
    np.testing.assert_allclose(shells.maxima, [5.0, 3.0])
    np.testing.assert_array_equal(shells.counts, [2, 3])


def test_fit_tail_recovers_decay_and_vanishing_tails():
    radii = np.array([2.0, 4.0, 8.0])
    fit = fit_tail(radii, 3.0 * radii**-2.5)
    assert fit.slope == pytest.approx(-2.5, abs=1e-10)
    assert fit_tail(radii, np.zeros(3)) is None


def test_trivial_profile_has_zero_envelope(trivial):
    assert decay_envelope(trivial).c_flat == 0.0


def test_algebraic_vorticity_saturates_the_envelope():
    # |Omega| = <y>^-2 is exactly the envelope for gamma = 1/2
    estimate = decay_envelope(make_fixture("envelope-algebraic", gamma=0.5))
    assert estimate.c_flat == pytest.approx(1.0, rel=1e-10)


def test_gaussian_envelope_attained_inside(gaussian_blob):
    estimate = decay_envelope(gaussian_blob)
    assert estimate.c_flat > 0.0
    assert estimate.shell_index < len(estimate.shell_ratios) - 1


def test_slow_decay_violates_the_envelope():
    with pytest.raises(EnvelopeViolationError):
        decay_envelope(make_fixture("envelope-algebraic", gamma=0.2))
