import numpy as np
import pytest

from ssguard.calculations.battery import nodal_battery
from ssguard.calculations.nodal import (
    default_eps_star,
    nodal_entries,
    nodal_set,
    outgoing_certificate,
    vanishing_order,
)
from ssguard.classes import Grid3, NodalPoint
from ssguard.constants import VERDICT_FAIL, VERDICT_INFO, VERDICT_PASS
from ssguard.errors import NotVanishingError, ShrinkRadiusError
from ssguard.io import make_fixture


def test_trivial_nodal_set_is_the_origin(trivial):
    points = nodal_set(trivial)
    assert len(points) == 1
    assert np.all(points[0].location == 0.0)
    assert points[0].residual == 0.0


def test_trivial_outgoing_constant_is_gamma(trivial):
    (point,) = nodal_set(trivial)
    certified = outgoing_certificate(trivial, point, eps_star=0.1)
    assert certified.outgoing
    assert certified.c_star == pytest.approx(trivial.gamma, rel=1e-12)
    assert certified.implied_gamma_bound == pytest.approx(0.5 + trivial.gamma)
    assert certified.eigenvalue_window_holds
    assert not certified.omega_nonzero
    assert certified.eigenpair_holds is None


def test_nodal_entries(trivial):
    (point,) = nodal_set(trivial)
    entries = {e.name: e for e in nodal_entries(trivial, [outgoing_certificate(trivial, point, 0.1)])}
    assert entries["nodal.count"].residual == 1.0
    assert entries["nodal.strain_trace"].verdict == VERDICT_PASS
    assert entries["nodal[0].outgoing"].verdict == VERDICT_PASS
    assert entries["nodal[0].gamma_bound"].residual == pytest.approx(0.5 + trivial.gamma)
    # Omega vanishes at the origin, so the bound is not implied
    assert entries["nodal[0].gamma_bound"].verdict == VERDICT_INFO
    assert entries["nodal[0].eigenvalue_window"].verdict == VERDICT_PASS


def test_certificate_radius_must_exclude_other_nodes(trivial):
    (point,) = nodal_set(trivial)
    neighbour = NodalPoint(location=np.array([0.05, 0.0, 0.0]), residual=0.0, eigenvalues=np.zeros(3))
    with pytest.raises(ShrinkRadiusError, match="shrink eps_star"):
        outgoing_certificate(trivial, point, eps_star=0.1, others=[neighbour])
    assert outgoing_certificate(trivial, point, eps_star=0.04, others=[neighbour]).outgoing
    with pytest.raises(ValueError):
        outgoing_certificate(trivial, point, eps_star=0.0)


def test_default_eps_star():
    points = [
        NodalPoint(location=np.array(loc, dtype=float), residual=0.0, eigenvalues=np.zeros(3))
        for loc in ([0, 0, 0], [0, 0, 0.09], [1, 0, 0])
    ]
    assert default_eps_star(points) == pytest.approx(0.03)
    assert default_eps_star(points[:1]) == 0.1


def test_power_vanishing_order():
    profile = make_fixture("power-vanishing")
    result = vanishing_order(profile, np.zeros(3))
    assert result.order == pytest.approx(2.0, abs=0.1)
    assert not result.infinite
    assert "finite order" in result.description


def test_flat_vanishing_is_infinite_order():
    profile = make_fixture("flat-vanishing")
    result = vanishing_order(profile, np.zeros(3))
    assert result.infinite
    assert result.description == "consistent with infinite-order vanishing"


def test_vanishing_order_needs_a_zero(gaussian_blob):
    with pytest.raises(NotVanishingError):
        vanishing_order(gaussian_blob, np.zeros(3))


def test_nodal_battery_reports_vanishing_order():
    entries = {e.name: e for e in nodal_battery(make_fixture("power-vanishing"))}
    assert entries["nodal.count"].residual == 1.0
    assert entries["nodal.vanishing_order"].residual == pytest.approx(2.0, abs=0.1)


def test_gamma_bound_fails_at_a_rotating_nodal_point():
    # V.y = gamma |y|^2 for a rigid rotation, so c_* = gamma and gamma >= 1/2 + c_* is violated
    profile = make_fixture("rigid-rotation", grid=Grid3.centered(17, 2.0), omega=1.5)
    origin = NodalPoint(location=np.zeros(3), residual=0.0, eigenvalues=np.zeros(3))
    certified = outgoing_certificate(profile, origin, eps_star=0.1)
    assert certified.omega_nonzero
    assert certified.c_star == pytest.approx(profile.gamma, rel=1e-12)
    bound = {e.name: e for e in nodal_entries(profile, [certified])}["nodal[0].gamma_bound"]
    assert bound.verdict == VERDICT_FAIL
    assert bound.residual == pytest.approx(0.5)
    assert bound.details["implied_gamma_bound"] == pytest.approx(0.5 + profile.gamma)
    assert "contradicts" in bound.message
