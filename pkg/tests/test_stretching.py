import numpy as np
import pytest
import sympy as sp

from ssguard.calculations.stretching import (
    argmax_stretching_check,
    cp_constant,
    locate_vorticity_maximum,
    normalized_threshold,
    outer_bound,
    sample_points,
    smallness_check,
    smallness_entry,
    stretching_batch,
    stretching_direct,
    stretching_entries,
    stretching_integral,
)
from ssguard.classes import StretchingResult
from ssguard.errors import DirectionUndefinedError
from ssguard.io import make_fixture


def test_cp_constant_matches_high_precision_value():
    exact = 2 * sp.Integer(6) ** sp.Rational(3, 5) * (3 / (4 * sp.pi)) ** sp.Rational(1, 5)
    assert cp_constant(2.0) == pytest.approx(float(sp.N(exact, 50)), abs=1e-12)
    assert cp_constant(2.0) == pytest.approx(4.400510119, abs=1e-8)


def test_normalized_threshold_at_p2():
    assert normalized_threshold(2.0) == pytest.approx(0.5 * np.sqrt(np.pi / 1296.0), abs=1e-12)


def test_constants_need_p_above_one():
    with pytest.raises(ValueError):
        cp_constant(1.0)
    with pytest.raises(ValueError):
        normalized_threshold(0.5)


def test_outer_bound_scaling():
    assert outer_bound(2.0, 1.0, 2.0) == pytest.approx(2.0 * np.sqrt(3.0 / (4.0 * np.pi)))
    assert outer_bound(1.0, 4.0, 3.0) == pytest.approx(outer_bound(1.0, 1.0, 3.0) / 4.0)


def test_tiny_profile_is_flagged_and_invariant_under_rescaling():
    profile = make_fixture("gaussian-blob", amplitude=1e-6)
    report = smallness_check(profile, 2.0)
    assert report.verdict == "VIOLATED"
    assert report.threshold == pytest.approx(1.0 / cp_constant(2.0))
    for lam in (0.5, 2.0):
        rescaled = smallness_check(profile.rescaled(lam), 2.0)
        assert rescaled.verdict == "VIOLATED"
        assert abs(rescaled.size - report.size) <= 1e-6 * report.size
    assert smallness_entry(report).verdict == "FAIL"


def test_unit_profile_satisfies_the_bound(gaussian_blob):
    report = smallness_check(gaussian_blob, 2.0)
    assert report.satisfied
    assert report.normalized_verdict is None


def test_smallness_domain_errors(trivial):
    with pytest.raises(ValueError, match="vanishes identically"):
        smallness_check(trivial, 2.0)
    with pytest.raises(ValueError, match="p > 3 gamma"):
        smallness_check(make_fixture("gaussian-blob", gamma=1.0), 2.0)


def test_planar_column_does_not_stretch(gaussian_column):
    y = np.array([0.3, -0.2, 0.5])
    assert stretching_direct(gaussian_column, y) == pytest.approx(0.0, abs=1e-14)
    result = stretching_integral(gaussian_column, y, L=0.5)
    assert abs(result.A_integral) <= 10.0 * result.quad_error + 1e-12
    assert result.inner_bound_holds and result.outer_bound_holds


def test_direction_undefined_where_vorticity_vanishes(gaussian_blob):
    with pytest.raises(DirectionUndefinedError):
        stretching_direct(gaussian_blob, np.array([9.0, 9.0, 9.0]))


def test_cutoff_must_fit_in_the_box(gaussian_ring):
    with pytest.raises(ValueError, match="exceeds the grid half width"):
        stretching_integral(gaussian_ring, np.array([1.0, 0.0, 0.0]), L=2.0)


def test_sample_points_are_reproducible(gaussian_ring):
    first = sample_points(gaussian_ring, 5, seed=3, L=0.5)
    np.testing.assert_array_equal(first, sample_points(gaussian_ring, 5, seed=3, L=0.5))
    assert first.shape == (5, 3)


def test_ring_majorants_hold_at_sampled_points(gaussian_ring):
    points = sample_points(gaussian_ring, 6, seed=0, L=0.5)
    results = stretching_batch(gaussian_ring, points, L=0.5)
    entries = {entry.name: entry for entry in stretching_entries(results)}
    assert entries["stretching.bound_in"].verdict == "PASS"
    assert entries["stretching.bound_out"].verdict == "PASS"


@pytest.mark.slow
def test_ring_integral_agrees_with_strain_contraction(gaussian_ring):
    points = sample_points(gaussian_ring, 20, seed=0, L=1.0)
    by_cutoff = {}
    for L in (0.25, 0.5, 1.0):
        results = stretching_batch(gaussian_ring, points, L=L)
        for res in results:
            assert abs(res.A_integral - res.A_direct) <= 1e-3 * max(1.0, abs(res.A_direct))
        by_cutoff[L] = results
    for a, b, c in zip(*by_cutoff.values()):
        spread = max(r.A_integral for r in (a, b, c)) - min(r.A_integral for r in (a, b, c))
        assert spread <= a.quad_error + b.quad_error + c.quad_error + 1e-3 * max(1.0, abs(a.A_direct))


@pytest.mark.slow
def test_majorants_at_random_points(gaussian_ring, gaussian_column):
    for profile in (gaussian_ring, gaussian_column):
        results = stretching_batch(profile, sample_points(profile, 100, seed=7, L=0.5), L=0.5)
        assert all(res.inner_bound_holds for res in results)
        assert all(res.outer_bound_holds for res in results)


def _result(a_direct, a_integral):
    return StretchingResult(
        point=np.zeros(3),
        A_direct=a_direct,
        A_integral=a_integral,
        alpha_in=a_integral,
        alpha_out=0.0,
        bound_in=1.0,
        bound_out=1.0,
        quad_error=0.0,
        L=0.5,
        p=2.0,
    )


def test_stretching_entries_flag_disagreement():
    entries = {e.name: e for e in stretching_entries([_result(0.5, 0.5), _result(0.2, 0.3)])}
    assert entries["stretching.agreement"].verdict == "FAIL"
    assert entries["stretching.agreement"].residual == pytest.approx(0.1)
    assert entries["stretching.bound_in"].verdict == "PASS"


def test_argmax_check(gaussian_column, trivial):
    location, peak, on_boundary = locate_vorticity_maximum(gaussian_column)
    assert peak == pytest.approx(1.0)
    assert not on_boundary
    np.testing.assert_allclose(location[:2], 0.0, atol=1e-12)
    # the column is planar, so A(y_*) = 0
    assert argmax_stretching_check(gaussian_column).verdict == "FAIL"
    with pytest.raises(ValueError):
        argmax_stretching_check(trivial)
