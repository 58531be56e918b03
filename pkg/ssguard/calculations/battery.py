"""The check batteries run by the command line: every applicable identity, bound and
obstruction for one profile, collected into a DiagnosticReport."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..classes import (
    AxisymProfile,
    DiagnosticReport,
    MeridionalTrajectory,
    NormRequest,
    Profile,
    ReportEntry,
    ResidualField,
    Trajectory,
)
from ..constants import CONFIG
from ..logger import LOGGER
from .axisym import (
    area_growth_check,
    axisym_invariant_check,
    fixed_point_entries,
    meridional_fixed_points,
    meridional_flow,
    profile_compatibility,
    record_axisym_residuals,
)
from .envelope import decay_envelope
from .flow import (
    IDENTITIES,
    bernoulli_monotonicity_check,
    flow_identity_check,
    global_outgoing_check,
)
from .integration import integrate_flow
from .nodal import default_eps_star, nodal_entries, nodal_set, outgoing_certificate, vanishing_entry, vanishing_order
from .normalization import grad_omega_sup, vorticity_of
from .norms import field_norm
from .quadrature import fibonacci_sphere
from .reconstruction import profile_consistency
from .selfsim import bernoulli, bernoulli_entries, pressure_gauge_entry, record_residuals
from .stretching import argmax_stretching_check, smallness_check, smallness_entry


@dataclass
class CheckRun:
    """A finished battery: the report plus the fields and paths behind it (used for plots)."""

    report: DiagnosticReport
    residuals: List[ResidualField] = field(default_factory=list)
    trajectories: List[Union[Trajectory, MeridionalTrajectory]] = field(default_factory=list)


def profile_summary(profile: Union[Profile, AxisymProfile]) -> dict:
    """Profile metadata for the report header, with the sup norms of U and Omega."""
    meta = profile.metadata()
    if isinstance(profile, Profile):
        sup = NormRequest(kind="sup")
        meta["U_sup"] = field_norm(profile.U, sup, profile.grid).value
        meta["Omega_sup"] = field_norm(vorticity_of(profile), sup, profile.grid).value
    return meta


def default_labels(profile: Profile, count: Optional[int] = None) -> np.ndarray:
    """Labels on a sphere of a quarter of the inscribed radius around the origin."""
    count = count or int(CONFIG.get("flow", "check_labels"))
    radius = 0.25 * profile.grid.inscribed_radius()
    return radius * fibonacci_sphere(count, include_axes=False)


def envelope_entry(profile: Profile) -> ReportEntry:
    estimate = decay_envelope(profile)
    return ReportEntry.info(
        "fields.c_flat",
        "|U| <= C_flat |y| <y>^(-1/gamma), |Omega| + |grad U| <= C_flat <y>^(-1/gamma)",
        estimate.c_flat,
        message=f"attained on the shell at |y| = {estimate.radius:.4g}",
        shell_index=estimate.shell_index,
    )


def normalization_entry(profile: Profile) -> ReportEntry:
    value = grad_omega_sup(profile)
    normalized = abs(value - 1.0) <= CONFIG.tolerance("normalization")
    if normalized:
        message = "normalized"
    elif value == 0.0:
        message = "the vorticity vanishes identically; no rescaling normalizes it"
    else:
        message = f"rescale with lambda = {value:.6g} to normalize"
    return ReportEntry.info(
        "fields.grad_omega_sup",
        "units fixed by |grad Omega|_inf = 1",
        value,
        message=message,
        normalized=normalized,
    )


def nodal_battery(profile: Profile, eps_star: Optional[float] = None) -> List[ReportEntry]:
    """Nodal set, local outgoing certificates and the vanishing order where Omega vanishes."""
    points = nodal_set(profile, profile.c_flat)
    eps = eps_star if eps_star is not None else default_eps_star(points)
    certified = [
        outgoing_certificate(profile, pt, eps, others=[o for o in points if o is not pt]) for pt in points
    ]
    entries = nodal_entries(profile, certified)
    threshold = float(CONFIG.get("vanishing", "threshold"))
    for pt in certified:
        if pt.omega is not None and np.linalg.norm(pt.omega) <= threshold:
            entries.append(vanishing_entry(vanishing_order(profile, pt.location), pt.location))
    return entries


def check_profile(
    profile: Profile,
    tau_span: Optional[Tuple[float, float]] = None,
    labels: Optional[Sequence[np.ndarray]] = None,
    p_values: Sequence[float] = (2.0,),
    with_flow: bool = True,
) -> CheckRun:
    """The full battery for a cartesian profile; domain errors become INCONCLUSIVE entries."""
    report = DiagnosticReport(profile=profile_summary(profile))
    run = CheckRun(report=report)
    report.record("fields.consistency", lambda: profile_consistency(profile))
    report.record("fields.c_flat", lambda: envelope_entry(profile))
    report.record("fields.grad_omega_sup", lambda: normalization_entry(profile))

    run.residuals = record_residuals(report, profile, p_values)
    report.record("pressure.gauge", lambda: pressure_gauge_entry(profile) or [])
    report.record("bernoulli", lambda: bernoulli_entries(bernoulli(profile)))
    report.record("stretching.argmax", lambda: argmax_stretching_check(profile))
    for p in p_values:
        report.record(f"stretching.smallness.{p:g}", lambda p=p: smallness_entry(smallness_check(profile, p)))

    if with_flow:
        span = tau_span or (0.0, float(CONFIG.get("flow", "check_tau")))
        chosen = default_labels(profile) if labels is None else labels
        run.trajectories = integrate_flow(profile, chosen, span)
        for which in IDENTITIES:
            report.record(
                f"flow.{which.replace('-', '_')}",
                lambda which=which: flow_identity_check(profile, run.trajectories, which),
            )
        report.record("flow.bernoulli_monotone", lambda: bernoulli_monotonicity_check(profile, run.trajectories))
    report.record("flow.global_outgoing", lambda: global_outgoing_check(profile))
    report.record("nodal", lambda: nodal_battery(profile))
    LOGGER.info(f"Check of '{profile.name}' finished: {report.verdict_counts()}")
    return run


def default_polygon(profile: AxisymProfile) -> np.ndarray:
    """A small square in the interior of the meridional rectangle, away from the axis."""
    grid = profile.grid
    center = grid.center.copy()
    half = 0.1 * float(np.min(grid.upper - grid.lower))
    center[0] = max(center[0], grid.lower[0] + 2.0 * half)
    offsets = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]) * half
    return center + offsets


def default_seeds(profile: AxisymProfile, count: int = 4) -> np.ndarray:
    """Seeds on the mid-height line, strictly off the axis."""
    grid = profile.grid
    lo, hi = grid.lower[0], grid.upper[0]
    r = np.linspace(lo, hi, count + 2)[1:-1]
    r = r[r > float(CONFIG.get("axisym", "axis_tolerance"))]
    return np.stack([r, np.full_like(r, grid.center[1])], axis=-1)


def check_axisym(profile: AxisymProfile, tau_span: Optional[Tuple[float, float]] = None) -> CheckRun:
    """The battery for an axisymmetric profile."""
    report = DiagnosticReport(profile=profile_summary(profile))
    run = CheckRun(report=report)
    span = tau_span or (0.0, float(CONFIG.get("flow", "check_tau")))
    report.record("axisym.compatibility", lambda: profile_compatibility(profile))

    run.residuals = record_axisym_residuals(report, profile)
    report.record(
        "axisym.fixed_points", lambda: fixed_point_entries(profile, meridional_fixed_points(profile))
    )
    report.record("axisym.area_growth", lambda: area_growth_check(profile, default_polygon(profile), span))
    run.trajectories = meridional_flow(profile, default_seeds(profile), span)
    report.record("axisym.invariant.swirl", lambda: axisym_invariant_check(profile, run.trajectories, "swirl"))
    if profile.Omega_theta is not None:
        report.record(
            "axisym.invariant.azimuthal-vorticity",
            lambda: axisym_invariant_check(profile, run.trajectories, "azimuthal-vorticity"),
        )
    LOGGER.info(f"Check of '{profile.name}' finished: {report.verdict_counts()}")
    return run
