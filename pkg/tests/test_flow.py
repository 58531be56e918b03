import numpy as np
import pytest

from ssguard.calculations.flow import (
    bernoulli_monotonicity_check,
    circulation,
    circulation_check,
    flow_identity_check,
    global_outgoing_check,
    weber_field,
)
from ssguard.calculations.integration import integrate_flow
from ssguard.classes import Grid3, Loop
from ssguard.constants import VERDICT_FAIL, VERDICT_INFO, VERDICT_PASS
from ssguard.io import make_fixture


@pytest.fixture(scope="module")
def ring_trajectories(gaussian_ring):
    labels = [np.array([1.0, 0.0, 0.1]), np.array([0.0, 0.8, -0.2]), np.array([0.5, 0.5, 0.0])]
    return integrate_flow(gaussian_ring, labels, (0.0, 2.0))


def test_jacobian_determinant_of_divergence_free_flow(gaussian_ring, ring_trajectories):
    entry = flow_identity_check(gaussian_ring, ring_trajectories, "jacobian-det")
    assert entry.verdict == VERDICT_PASS
    assert entry.residual < 1e-6
    assert entry.details["orientation_preserving"]
    for traj in ring_trajectories:
        assert traj.taus[-1] == pytest.approx(2.0)


def test_trivial_flow_identities(trivial):
    trajectories = integrate_flow(trivial, [np.array([0.5, 0.0, 0.0])], (0.0, 1.0))
    assert flow_identity_check(trivial, trajectories, "jacobian-det").verdict == VERDICT_PASS
    assert flow_identity_check(trivial, trajectories, "cauchy").residual == 0.0
    assert np.all(weber_field(trivial, trajectories[0]) == 0.0)


def test_flow_identity_argument_errors(trivial):
    trajectories = integrate_flow(trivial, [np.ones(3)], (0.0, 1.0), with_jacobian=False)
    with pytest.raises(ValueError, match="Unknown identity"):
        flow_identity_check(trivial, trajectories, "kelvin")
    with pytest.raises(ValueError, match="jacobian"):
        flow_identity_check(trivial, trajectories, "jacobian-det")


def test_circulation_of_rigid_rotation():
    omega = 0.7
    profile = make_fixture("rigid-rotation", omega=omega)
    loop = Loop.circle(0.5, 0.0, n=256)
    # trapezoid rule on the inscribed polygon: 2 pi r^2 omega * sin(2 pi / n) / (2 pi / n)
    h = 2.0 * np.pi / 256
    assert circulation(profile, loop.vertices) == pytest.approx(omega * 0.25 * 256 * np.sin(h), rel=1e-12)
    assert circulation(profile, loop.vertices, orientation=-1) < 0


def test_selfsimilar_kelvin_fails_for_rigid_rotation():
    # the loop dilates by exp(gamma tau), so the scaled circulation grows like exp(tau)
    profile = make_fixture("rigid-rotation", omega=1.0)
    entry = circulation_check(profile, Loop.circle(0.5, 0.0, n=32), (0.0, 1.0), num_samples=5)
    assert entry.verdict == VERDICT_FAIL
    assert entry.residual == pytest.approx(np.e - 1.0, rel=1e-6)
    assert entry.details["simple"]


def test_circulation_of_trivial_profile_is_conserved(trivial):
    entry = circulation_check(trivial, Loop.circle(1.0, 0.5, n=16), (0.0, 1.0), num_samples=3)
    assert entry.verdict == VERDICT_PASS
    assert entry.details["initial_circulation"] == 0.0


def test_loop_validation():
    with pytest.raises(ValueError):
        Loop(vertices=np.zeros((2, 3)))
    with pytest.raises(ValueError):
        Loop(vertices=np.eye(3), orientation=2)
    with pytest.raises(ValueError, match="orientation"):
        Loop(vertices=Loop.circle(1.0, 0.0, n=16).vertices, orientation=2)


def test_self_intersecting_loops_are_rejected():
    # figure eight through the origin at phi = 0 and phi = pi
    phi = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    eight = np.stack([np.sin(phi), np.sin(phi) * np.cos(phi), np.zeros_like(phi)], axis=-1)
    with pytest.raises(ValueError, match="intersects itself"):
        Loop(vertices=eight)
    assert Loop.circle(1.0, 0.0, n=16).is_simple()


def test_bernoulli_monotone_along_dilation(trivial):
    trajectories = integrate_flow(trivial, [np.array([0.3, 0.1, 0.0])], (0.0, 1.0))
    monotone, identity = bernoulli_monotonicity_check(trivial, trajectories)
    if trivial.gamma == 0.5:
        assert monotone.verdict == VERDICT_INFO
    else:
        assert monotone.verdict == VERDICT_PASS
        expected = "non-increasing" if trivial.gamma < 0.5 else "non-decreasing"
        assert monotone.details["direction"] == expected
    assert identity.residual == pytest.approx(0.0, abs=1e-12)


def test_global_outgoing_of_trivial_profile(trivial):
    entry = global_outgoing_check(trivial)
    assert entry.verdict == VERDICT_INFO
    assert entry.residual == pytest.approx(trivial.gamma)
    assert entry.details["holds"]
    assert entry.details["implied_gamma_bound"] == pytest.approx(0.5 + trivial.gamma)


def test_inward_bump_is_not_globally_outgoing():
    entry = global_outgoing_check(make_fixture("inward-bump"))
    assert entry.residual < 0
    assert not entry.details["holds"]
    assert entry.details["implied_gamma_bound"] is None


def test_global_outgoing_bound_is_judged_where_vorticity_is_nonzero():
    profile = make_fixture("rigid-rotation", grid=Grid3.centered(17, 2.0), omega=1.5)
    entry = global_outgoing_check(profile)
    assert entry.details["c_star"] == pytest.approx(profile.gamma)
    assert entry.residual == pytest.approx(0.5)
    assert entry.verdict == VERDICT_FAIL
