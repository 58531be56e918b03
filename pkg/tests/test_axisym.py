import numpy as np
import pytest

from ssguard.calculations.axisym import (
    alpha_limit_entry,
    area_growth_check,
    axis_outgoing_certificate,
    axisym_invariant_check,
    axisym_residual,
    axisym_residual_entry,
    backward_alpha_limit,
    fixed_point_entries,
    meridional_fixed_points,
    meridional_flow,
    orbit_connection_check,
    profile_compatibility,
    record_axisym_residuals,
    weighted_area,
)
from ssguard.calculations.battery import default_polygon
from ssguard.classes import DiagnosticReport
from ssguard.constants import VERDICT_FAIL, VERDICT_INCONCLUSIVE, VERDICT_INFO, VERDICT_PASS
from ssguard.errors import AxisContactError
from ssguard.io import make_fixture


def _by_equation(residuals):
    return {res.which.split(".", 1)[1]: res for res in residuals}


def test_manufactured_swirl_satisfies_the_swirl_equation(manufactured_swirl):
    residuals = _by_equation(axisym_residual(manufactured_swirl))
    assert residuals["swirl"].sup <= 1e-8
    assert residuals["continuity"].sup <= 1e-8
    assert axisym_residual_entry(residuals["swirl"]).verdict == VERDICT_PASS
    # the meridional equations are not forced by the manufactured field
    radial = axisym_residual_entry(residuals["radial"])
    assert radial.verdict == VERDICT_FAIL
    assert "radial equation" in radial.message


def test_manufactured_azimuthal_vorticity_equation():
    profile = make_fixture("manufactured-azimuthal")
    report = DiagnosticReport()
    residuals = _by_equation(record_axisym_residuals(report, profile))
    assert residuals["omega_theta"].sup <= 1e-8
    assert residuals["continuity"].sup <= 1e-8
    # no pressure is supplied and the linear strain does not decay
    assert "radial" not in residuals
    assert report["axisym.radial"].verdict == VERDICT_INCONCLUSIVE
    assert report["axisym.omega_theta"].verdict == VERDICT_PASS


def test_swirl_invariant_is_transported(manufactured_swirl):
    seeds = [np.array([1.0, 0.0]), np.array([0.5, 0.5]), np.array([2.0, -0.8])]
    trajectories = meridional_flow(manufactured_swirl, seeds, (0.0, 3.0))
    entry = axisym_invariant_check(manufactured_swirl, trajectories, "swirl")
    assert entry.residual <= 1e-8
    assert entry.verdict == VERDICT_PASS
    assert entry.details["paths"] == 3


@pytest.mark.parametrize("r0", [0.5, 1.0, 2.0])
def test_swirl_circulation_on_horizontal_circles(manufactured_swirl, r0):
    # the circulation along the circle through (r0, 0) is 2 pi R U_theta
    (traj,) = meridional_flow(manufactured_swirl, [np.array([r0, 0.0])], (0.0, 3.0))
    entry = axisym_invariant_check(manufactured_swirl, [traj], "swirl")
    assert entry.residual <= 1e-6
    assert np.all(traj.positions[:, 1] == pytest.approx(0.0, abs=1e-12))


def test_azimuthal_vorticity_invariant_is_transported():
    profile = make_fixture("manufactured-azimuthal")
    trajectories = meridional_flow(profile, [np.array([1.0, 0.2])], (0.0, 2.0))
    entry = axisym_invariant_check(profile, trajectories, "azimuthal-vorticity")
    assert entry.residual <= 1e-8


def test_invariant_check_rejects_unknown_names(manufactured_swirl):
    with pytest.raises(ValueError, match="Unknown invariant"):
        axisym_invariant_check(manufactured_swirl, [], "helicity")


def test_meridional_angle_of_linear_strain_is_zero(axisym_strain):
    (traj,) = meridional_flow(axisym_strain, [np.array([1.0, 0.5])], (0.0, 1.0), num_samples=5)
    assert np.all(traj.theta == 0.0)
    assert traj.positions[-1, 0] == pytest.approx(np.exp(0.5), rel=1e-8)
    assert traj.positions[-1, 1] == pytest.approx(0.5 * np.exp(0.2), rel=1e-8)


def test_axis_seeds_stay_on_the_axis(axisym_strain):
    (traj,) = meridional_flow(axisym_strain, [np.array([0.0, 0.5])], (0.0, 1.0), num_samples=5)
    assert np.all(traj.positions[:, 0] == 0.0)


def test_weighted_area_of_unit_square():
    square = np.array([[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0]])
    # int_1^2 r dr = 3/2
    assert weighted_area(square) == pytest.approx(1.5)
    assert weighted_area(square[::-1]) == pytest.approx(-1.5)


def test_area_growth_of_linear_strain(axisym_strain):
    entry = area_growth_check(axisym_strain, default_polygon(axisym_strain), (0.0, 1.0))
    assert entry.verdict == VERDICT_PASS
    assert entry.residual < 1e-6
    assert entry.details["tau_range"] == [0.0, 1.0]


def test_area_growth_rejects_polygons_on_the_axis(axisym_strain):
    polygon = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(AxisContactError):
        area_growth_check(axisym_strain, polygon, (0.0, 1.0))
    with pytest.raises(ValueError, match="three"):
        area_growth_check(axisym_strain, polygon[1:], (0.0, 1.0))


def test_swirling_off_axis_fixed_point_forces_gamma_one_half(off_axis_zero):
    points = meridional_fixed_points(off_axis_zero)
    assert any(pt.on_axis and np.allclose(pt.location, 0.0) for pt in points)
    (target,) = [pt for pt in points if np.allclose(pt.location, [1.0, 0.0], atol=1e-6)]
    assert not target.on_axis
    assert target.U_theta == pytest.approx(0.2)
    assert target.circulation == pytest.approx(2.0 * np.pi * 0.2)
    assert "inconsistent" in target.verdict

    entries = fixed_point_entries(off_axis_zero, points)
    assert entries[0].verdict == VERDICT_INFO
    swirl = [e for e in entries if e.name.endswith(".swirl")]
    assert swirl and all(e.verdict == VERDICT_FAIL for e in swirl)


def test_off_axis_fixed_point_at_gamma_one_half_is_consistent():
    profile = make_fixture("off-axis-zero", gamma=0.5)
    points = [pt for pt in meridional_fixed_points(profile) if np.allclose(pt.location, [1.0, 0.0], atol=1e-6)]
    assert points and "consistent with gamma = 1/2" in points[0].verdict


def test_axis_outgoing_certificate(axisym_strain):
    # r V_r + z V_z = 0.5 r^2 + 0.2 z^2 for gamma = 0.4, a = 0.1
    outgoing, bound = axis_outgoing_certificate(axisym_strain, z_star=0.0, eps_star=0.1)
    assert outgoing.verdict == VERDICT_PASS
    assert outgoing.residual == pytest.approx(0.2, rel=1e-10)
    assert not outgoing.details["omega_nonzero"]
    assert bound.residual == pytest.approx(0.7, rel=1e-10)


def test_axis_outgoing_needs_a_nodal_point(axisym_strain):
    with pytest.raises(ValueError, match="not an axis nodal point"):
        axis_outgoing_certificate(axisym_strain, z_star=0.5, eps_star=0.1)


def test_backward_orbits_converge_to_the_axis_fixed_point(axisym_strain):
    result = backward_alpha_limit(axisym_strain, np.array([1.0, 0.5]), tau_min=-20.0)
    assert result.classification == "axis-fixed-point"
    assert np.allclose(result.fixed_point, 0.0)
    assert result.bounded_guarantee
    assert alpha_limit_entry(result).verdict == VERDICT_INFO


def test_alpha_limit_argument_errors(axisym_strain):
    with pytest.raises(ValueError, match="r > 0"):
        backward_alpha_limit(axisym_strain, np.array([0.0, 0.5]))
    with pytest.raises(ValueError, match="negative"):
        backward_alpha_limit(axisym_strain, np.array([1.0, 0.5]), tau_min=1.0)


def test_profile_compatibility(off_axis_zero):
    entries = {e.name: e for e in profile_compatibility(off_axis_zero)}
    assert entries["axisym.swirl_sup"].verdict == VERDICT_INFO
    assert entries["axisym.swirl_sup"].residual > 0
    assert entries["axisym.axis_vanishing"].verdict == VERDICT_PASS
    assert entries["axisym.omega_compat"].verdict == VERDICT_PASS


def test_orbit_escaping_forward_is_not_a_connection(axisym_strain):
    entry = orbit_connection_check(axisym_strain, np.array([1.0, 0.5]), (-20.0, 5.0))
    assert entry.verdict == VERDICT_INFO
    assert np.allclose(entry.details["alpha"], 0.0)
    assert entry.details["omega"] is None
    assert entry.details["all_on_axis"]
    with pytest.raises(ValueError, match="interior"):
        orbit_connection_check(axisym_strain, np.array([1.0, 0.5]), (0.0, 5.0))
