import numpy as np
import pytest

from ssguard.calculations.criteria import (
    DIVERGENT,
    FINITE,
    INCONCLUSIVE,
    alpha_pointwise_bound,
    criteria_entries,
    ell_mu_criterion,
    gamma_lower_bound,
    optimal_radius,
    viscous_criterion,
)
from ssguard.classes import TimeSeries, ViscousSplitSpec
from ssguard.constants import VERDICT_INFO

BLOWUP_TIME = 1.0
TIMES = np.linspace(0.0, 0.99, 200)


def _series(values, name="series"):
    return TimeSeries(TIMES, values, BLOWUP_TIME, name=name)


def _selfsimilar_ell_mu(gamma, mu=0.5, L0=1.0):
    """Hoelder and energy series whose length scale is L0 (1 - t / T_*)^gamma."""
    ell = L0 * (1.0 - TIMES / BLOWUP_TIME) ** gamma
    holder = _series(ell ** (-(2.0 * mu + 5.0) / 2.0), "holder")
    energy = _series(np.ones_like(TIMES), "energy")
    return ell_mu_criterion(holder, energy, mu, L0)


def test_gamma_lower_bound():
    assert gamma_lower_bound(2) == pytest.approx(0.4, abs=1e-15)
    assert gamma_lower_bound(3) == pytest.approx(0.5, abs=1e-15)
    assert gamma_lower_bound(np.inf) == 1.0
    with pytest.raises(ValueError):
        gamma_lower_bound(1.5)


@pytest.mark.parametrize(
    "gamma, verdict", [(0.3, FINITE), (0.35, FINITE), (0.4, DIVERGENT), (0.45, DIVERGENT)]
)
def test_ell_mu_verdict_flips_at_two_fifths(gamma, verdict):
    result = _selfsimilar_ell_mu(gamma)
    assert result.tail.exponent == pytest.approx(2.5 * gamma, abs=1e-8)
    assert result.tail.verdict == verdict
    assert result.ell_exponent == pytest.approx(gamma, abs=1e-8)
    if verdict == FINITE:
        assert np.isfinite(result.total)
    else:
        assert result.total == np.inf


def test_ell_mu_rejects_bad_inputs():
    holder = _series(np.ones_like(TIMES))
    with pytest.raises(ValueError, match="time base"):
        ell_mu_criterion(holder, TimeSeries(TIMES[:-1], np.ones(len(TIMES) - 1), BLOWUP_TIME), 0.5, 1.0)
    with pytest.raises(ValueError, match=r"\(0, 1\)"):
        ell_mu_criterion(holder, holder, 1.5, 1.0)
    with pytest.raises(ValueError, match="zeros"):
        ell_mu_criterion(holder, _series(np.zeros_like(TIMES)), 0.5, 1.0)


def test_ell_mu_is_capped_by_L0():
    holder = _series(np.full_like(TIMES, 1e-6))
    energy = _series(np.ones_like(TIMES))
    result = ell_mu_criterion(holder, energy, 0.5, 0.25)
    assert np.all(result.ell == 0.25)
    assert result.integral == pytest.approx(0.25**-2.5 * TIMES[-1])


def test_too_short_tail_is_inconclusive():
    times = np.array([0.0, 0.5])
    series = TimeSeries(times, np.ones(2), BLOWUP_TIME)
    result = ell_mu_criterion(series, series, 0.5, 1.0)
    assert result.tail.verdict == INCONCLUSIVE


@pytest.mark.parametrize("gamma, verdict", [(0.35, FINITE), (0.4, DIVERGENT)])
def test_alpha_bound_on_selfsimilar_scaling(gamma, verdict):
    gradw = _series((BLOWUP_TIME - TIMES) ** -(1.0 + gamma), "gradw")
    up = _series(np.ones_like(TIMES), "up")
    result = alpha_pointwise_bound(gradw, up, p=2.0)
    assert result.tail.exponent == pytest.approx(5.0 * (1.0 + gamma) / 7.0, abs=1e-8)
    assert result.tail.verdict == verdict
    assert result.search_deviation < 1e-8


def test_optimal_radius_minimizes_split_bound():
    G, E, p = np.array([3.0]), np.array([2.0]), 2.0
    R = optimal_radius(G, E, p, 1.0, 1.0)

    def bound(r):
        return r * G + r ** (-1.0 - 3.0 / p) * E

    assert bound(R) < bound(1.01 * R)
    assert bound(R) < bound(0.99 * R)


def test_alpha_bound_needs_positive_series():
    zeros = _series(np.zeros_like(TIMES))
    with pytest.raises(ValueError, match="strictly positive"):
        alpha_pointwise_bound(zeros, zeros, p=2.0)


def test_viscous_criterion():
    result = viscous_criterion(ViscousSplitSpec(Gamma=1.0, C=1.0, gamma=0.6))
    assert result.bound == pytest.approx(16.0 * (1.0 + 1.0 / 0.6), abs=1e-9)
    assert result.bound == pytest.approx(42.666666666666, abs=1e-9)
    assert not result.divergent

    divergent = viscous_criterion(ViscousSplitSpec(Gamma=1.0, C=1.0, gamma=0.5))
    assert divergent.divergent
    assert divergent.bound is None
    assert "divergent" in divergent.verdict

    assert viscous_criterion(ViscousSplitSpec(Gamma=2.0, C=0.0, gamma=0.3)).bound == 32.0


def test_criteria_entries():
    spec = ViscousSplitSpec(Gamma=1.0, C=1.0, gamma=0.5)
    entries = criteria_entries(p=2.0, viscous=(spec, viscous_criterion(spec)))
    assert [e.name for e in entries] == ["criteria.gamma_bound", "criteria.viscous"]
    assert all(e.verdict == VERDICT_INFO for e in entries)
    assert entries[0].residual == pytest.approx(0.4)
    assert entries[1].residual == np.inf
