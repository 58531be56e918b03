import numpy as np
import pytest

from ssguard.calculations.fitting import fit_even_quadratic, fit_line, fit_power_law


def test_fit_line_recovers_exact_line():
    x = np.linspace(-1.0, 2.0, 11)
    fit = fit_line(x, 3.0 * x - 0.5)
    assert fit.slope == pytest.approx(3.0, abs=1e-10)
    assert fit.intercept == pytest.approx(-0.5, abs=1e-10)
    assert fit.rms < 1e-10


def test_fit_line_two_points_has_infinite_stderr():
    fit = fit_line([0.0, 1.0], [1.0, 2.0])
    assert np.isinf(fit.slope_stderr)


def test_fit_line_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_line([1.0], [1.0])
    with pytest.raises(ValueError):
        fit_line([0.0, 1.0, 2.0], [0.0, np.nan, 1.0])


def test_fit_power_law_exponent_and_band(rng):
    x = np.geomspace(1e-3, 1.0, 20)
    values = 2.0 * x**-1.25 * (1.0 + 1e-3 * rng.standard_normal(20))
    fit = fit_power_law(x, values)
    assert fit.slope == pytest.approx(-1.25, abs=1e-3)
    lo, hi = fit.band(3.0)
    assert lo <= fit.slope <= hi


def test_fit_power_law_needs_positive_values():
    with pytest.raises(ValueError):
        fit_power_law([1.0, 2.0], [1.0, -1.0])


def test_fit_even_quadratic():
    rho = np.linspace(1.0, 3.0, 9)
    c0, c2 = fit_even_quadratic(rho, 0.7 - 0.1 * rho**2)
    assert c0 == pytest.approx(0.7, abs=1e-10)
    assert c2 == pytest.approx(-0.1, abs=1e-10)
