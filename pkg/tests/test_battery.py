import dataclasses

import numpy as np

from ssguard.calculations.battery import (
    check_axisym,
    check_profile,
    default_labels,
    default_polygon,
    default_seeds,
    normalization_entry,
    profile_summary,
)
from ssguard.constants import VERDICT_FAIL, VERDICT_INCONCLUSIVE, VERDICT_PASS
from ssguard.io import expected_outcomes, make_fixture


def test_trivial_battery_has_no_failures():
    profile = make_fixture("trivial")
    run = check_profile(profile, tau_span=(0.0, 0.5))
    report = run.report
    assert not report.has_failures
    for name, verdict in expected_outcomes("trivial").items():
        if name in report:
            assert report[name].verdict == verdict
    # the stretching factor is undefined for a vanishing vorticity
    assert report["stretching.argmax"].verdict == VERDICT_INCONCLUSIVE
    assert len(run.trajectories) == len(default_labels(profile))
    assert {res.which for res in run.residuals} >= {"velocity-form", "divergence"}


def test_burgers_battery_matches_catalog():
    profile = make_fixture("burgers")
    report = check_profile(profile, with_flow=False).report
    assert report["res.velocity"].verdict == VERDICT_FAIL
    assert report["res.div"].verdict == VERDICT_PASS
    assert report.exit_code() == 1
    assert "flow.jacobian_det" not in report


def test_default_labels_lie_inside_the_box(gaussian_ring):
    labels = default_labels(gaussian_ring, count=8)
    assert labels.shape == (8, 3)
    assert np.allclose(np.linalg.norm(labels, axis=-1), 0.25 * gaussian_ring.grid.inscribed_radius())


def test_profile_summary(gaussian_blob):
    meta = profile_summary(gaussian_blob)
    assert meta["U_sup"] == 0.0
    assert meta["Omega_sup"] == 1.0
    assert meta["symmetry"] == "cartesian"


def test_axisym_battery(axisym_strain):
    run = check_axisym(axisym_strain, tau_span=(0.0, 0.5))
    report = run.report
    assert report["axisym.continuity"].verdict == VERDICT_PASS
    assert report["axisym.area_growth"].verdict == VERDICT_PASS
    assert report["axisym.invariant.swirl"].verdict in (VERDICT_PASS, VERDICT_INCONCLUSIVE)
    assert len(run.trajectories) == len(default_seeds(axisym_strain))


def test_default_polygon_and_seeds_avoid_the_axis(axisym_strain):
    polygon = default_polygon(axisym_strain)
    assert polygon.shape == (4, 2)
    assert polygon[:, 0].min() > 0
    seeds = default_seeds(axisym_strain)
    assert np.all(seeds[:, 0] > 0)


def test_missing_pressure_only_blocks_the_velocity_residual(gaussian_column):
    profile = dataclasses.replace(gaussian_column, P=None)
    run = check_profile(profile, with_flow=False)
    report = run.report
    assert report["res.velocity"].verdict == VERDICT_INCONCLUSIVE
    assert report["res.velocity"].details["error"] == "NonDecayingFieldError"
    assert report["res.div"].verdict == VERDICT_PASS
    assert "res.vorticity" in report
    assert "res.lp.2" in report
    assert "res" not in report
    assert {res.which for res in run.residuals} >= {"vorticity-form", "divergence"}


def test_missing_axisym_pressure_only_blocks_the_meridional_equations(axisym_strain):
    profile = dataclasses.replace(axisym_strain, P=None)
    report = check_axisym(profile, tau_span=(0.0, 0.5)).report
    assert report["axisym.radial"].verdict == VERDICT_INCONCLUSIVE
    assert report["axisym.axial"].verdict == VERDICT_INCONCLUSIVE
    assert report["axisym.swirl"].verdict == VERDICT_PASS
    assert report["axisym.continuity"].verdict == VERDICT_PASS


def test_normalization_entry_has_no_rescale_hint_for_zero_vorticity():
    entry = normalization_entry(make_fixture("trivial"))
    assert entry.residual == 0.0
    assert "lambda" not in entry.message
    assert "vanishes identically" in entry.message
    blob = normalization_entry(make_fixture("gaussian-blob", amplitude=2.0))
    assert "rescale with lambda" in blob.message
