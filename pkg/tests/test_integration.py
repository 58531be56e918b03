import numpy as np
import pytest

from ssguard.calculations.integration import integrate_flow, sample_ode, sample_taus, transport_velocity


def test_sample_taus_contains_zero():
    taus = sample_taus((0.5, 2.0), num_samples=4)
    assert taus[0] == 0.0
    assert np.all(np.diff(taus) > 0)
    backward = sample_taus((0.0, -1.0), num_samples=5)
    assert backward.min() == -1.0 and backward.max() == 0.0


@pytest.mark.parametrize("span", [(1.0, 1.0), (0.0, np.inf)])
def test_sample_taus_rejects_empty_spans(span):
    with pytest.raises(ValueError):
        sample_taus(span)


def test_transport_velocity_shapes(trivial):
    point = np.array([1.0, 2.0, 3.0])
    assert np.allclose(transport_velocity(trivial, point), trivial.gamma * point)
    block = np.ones((4, 5, 3))
    assert transport_velocity(trivial, block).shape == (4, 5, 3)


def test_trivial_flow_is_pure_dilation(trivial):
    label = np.array([0.3, -0.2, 0.5])
    (traj,) = integrate_flow(trivial, [label], (0.0, 3.0))
    gamma = trivial.gamma
    expected = label[None] * np.exp(gamma * traj.taus)[:, None]
    assert traj.taus[-1] == pytest.approx(3.0)
    assert np.allclose(traj.positions, expected, rtol=1e-8, atol=0)
    assert np.allclose(traj.determinants(), np.exp(3.0 * gamma * traj.taus), rtol=1e-8)
    assert traj.orientation_preserving
    assert not traj.stats.truncated


def test_backward_flow_contracts(trivial):
    label = np.array([1.0, 0.0, 0.0])
    (traj,) = integrate_flow(trivial, [label], (-2.0, 1.0), num_samples=7, with_jacobian=False)
    assert traj.jacobians is None
    assert traj.taus[0] == pytest.approx(-2.0)
    assert traj.positions[0, 0] == pytest.approx(np.exp(-2.0 * trivial.gamma), rel=1e-8)
    assert np.allclose(traj.positions[traj.index_of_zero], label)


def test_sample_ode_truncates_blowing_up_solutions():
    # dx/dt = x^2 with x(0) = 1 blows up at t = 1.
    taus = np.linspace(0.0, 2.0, 9)
    kept, states, stats = sample_ode(lambda t, x: x**2, np.array([1.0]), taus)
    assert stats.truncated
    assert kept.max() < 1.0
    assert np.allclose(states[:, 0], 1.0 / (1.0 - kept), rtol=1e-6)


def test_integrator_tolerance_must_be_positive(trivial):
    with pytest.raises(ValueError, match="positive"):
        integrate_flow(trivial, [np.ones(3)], (0.0, 1.0), tolerance=-1.0)
    with pytest.raises(ValueError, match="positive"):
        integrate_flow(trivial, [np.ones(3)], (0.0, 1.0), tolerance=0.0)


def test_explicit_integrator_tolerance_is_used(trivial):
    (traj,) = integrate_flow(trivial, [np.ones(3)], (0.0, 1.0), tolerance=1e-6)
    assert traj.stats.rtol == 1e-6
    assert traj.stats.atol == pytest.approx(1e-8)


def test_sample_count_must_allow_a_span():
    with pytest.raises(ValueError, match="at least 2"):
        sample_taus((0.0, 1.0), num_samples=0)
