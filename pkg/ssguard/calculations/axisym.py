"""Axisymmetric reduction: cylindrical residuals, meridional flow, fixed points with the swirl
diagnostic, weighted-area growth, transported invariants and backward alpha-limits."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from ..classes import (
    AlphaLimitResult,
    AxisymProfile,
    DiagnosticReport,
    FieldSource,
    IntegratorStats,
    MeridionalFixedPoint,
    MeridionalTrajectory,
    ReportEntry,
    ResidualField,
)
from ..constants import CONFIG
from ..errors import AxisContactError
from ..logger import LOGGER
from ..util import parallel_map
from .integration import sample_ode, sample_taus
from .quadrature import gauss_legendre, half_circle_directions
from .selfsim import interior_norms, recover_pressure

EQUATIONS = (
    "radial",
    "swirl",
    "axial",
    "continuity",
    "omega_r",
    "omega_theta",
    "omega_z",
)

REFERENCES = {
    "radial": "(1-gamma) U_r + D U_r - U_theta^2 / r + d_r P = 0",
    "swirl": "(1-gamma) U_theta + D U_theta + U_r U_theta / r = 0, "
    "equivalently D (r U_theta) + (1-2 gamma) r U_theta = 0",
    "axial": "(1-gamma) U_z + D U_z + d_z P = 0",
    "continuity": "d_r U_r + U_r / r + d_z U_z = 0",
    "omega_r": "Omega_r + D Omega_r = Omega_r d_r U_r + Omega_z d_z U_r",
    "omega_theta": "Omega_theta + D Omega_theta = (U_r Omega_theta - 2 U_theta Omega_r) / r",
    "omega_z": "Omega_z + D Omega_z = Omega_r d_r U_z + Omega_z d_z U_z",
}

_PRESSURE_EQUATIONS = ("radial", "axial")
_VORTICITY_EQUATIONS = ("omega_r", "omega_theta", "omega_z")

FieldData = Tuple[np.ndarray, np.ndarray]


def _axis_tol() -> float:
    return float(CONFIG.get("axisym", "axis_tolerance"))


def axis_quotient(f: np.ndarray, df_dr: np.ndarray, r: np.ndarray) -> np.ndarray:
    """f / r off the axis, d_r f on it (the limit for fields vanishing at r = 0)."""
    r = np.asarray(r, dtype=float)
    on_axis = r <= _axis_tol()
    safe = np.where(on_axis, 1.0, r)
    return np.where(on_axis, df_dr, f / safe)


def _component_data(comp: Optional[FieldSource], profile: AxisymProfile, points: np.ndarray) -> FieldData:
    """Values and (d_r, d_z) gradients of a component; absent components are zero."""
    if comp is None:
        return np.zeros(points.shape[:-1]), np.zeros(points.shape)
    if points.shape == profile.grid.dims + (2,):
        return comp.values_on(profile.grid), comp.jacobian_on(profile.grid)
    return comp.evaluate(points), comp.jacobian(points)


def _pressure_gradient(profile: AxisymProfile, points: np.ndarray) -> Tuple[np.ndarray, str]:
    """(d_r P, d_z P) from the supplied pressure or from the pressure of the cartesian lift."""
    if profile.P is not None:
        return _component_data(profile.P, profile, points)[1], "supplied"
    pressure = recover_pressure(profile.to_cartesian())
    cart = np.stack([points[..., 0], np.zeros(points.shape[:-1]), points[..., 1]], axis=-1)
    grad = pressure.jacobian(cart)
    return np.stack([grad[..., 0], grad[..., 2]], axis=-1), "recovered"


def _equation_values(profile: AxisymProfile, name: str, points: np.ndarray) -> Tuple[np.ndarray, Optional[str]]:
    gamma = profile.gamma
    r, z = points[..., 0], points[..., 1]
    ur, gur = _component_data(profile.U_r, profile, points)
    ut, gut = _component_data(profile.U_theta, profile, points)
    uz, guz = _component_data(profile.U_z, profile, points)
    v_r, v_z = gamma * r + ur, gamma * z + uz

    def transport(grad: np.ndarray) -> np.ndarray:
        return v_r * grad[..., 0] + v_z * grad[..., 1]

    if name == "continuity":
        return gur[..., 0] + axis_quotient(ur, gur[..., 0], r) + guz[..., 1], None
    if name == "swirl":
        return (1.0 - gamma) * ut + transport(gut) + ur * axis_quotient(ut, gut[..., 0], r), None
    if name in _PRESSURE_EQUATIONS:
        grad_p, source = _pressure_gradient(profile, points)
        if name == "radial":
            values = (1.0 - gamma) * ur + transport(gur) - ut * axis_quotient(ut, gut[..., 0], r)
            return values + grad_p[..., 0], source
        return (1.0 - gamma) * uz + transport(guz) + grad_p[..., 1], source

    if not profile.has_vorticity:
        raise ValueError(f"The '{name}' equation needs vorticity components.")
    wr, gwr = _component_data(profile.Omega_r, profile, points)
    wt, gwt = _component_data(profile.Omega_theta, profile, points)
    wz, gwz = _component_data(profile.Omega_z, profile, points)
    if name == "omega_r":
        return wr + transport(gwr) - wr * gur[..., 0] - wz * gur[..., 1], None
    if name == "omega_z":
        return wz + transport(gwz) - wr * guz[..., 0] - wz * guz[..., 1], None
    if name == "omega_theta":
        source = ur * axis_quotient(wt, gwt[..., 0], r) - 2.0 * ut * axis_quotient(wr, gwr[..., 0], r)
        return wt + transport(gwt) - source, None
    raise ValueError(f"Unknown axisymmetric equation '{name}', use one of {EQUATIONS}.")


def axisym_equation(profile: AxisymProfile, name: str) -> ResidualField:
    """Residual of one cylindrical equation on the meridional grid with its interior norms."""
    grid = profile.grid
    values, pressure_source = _equation_values(profile, name, grid.points())
    mask = grid.interior_mask(int(CONFIG.get("numerics", "interior_width")))
    sup, l2 = interior_norms(values, grid, mask)
    return ResidualField(
        which=f"axisym.{name}",
        field=FieldSource.sampled(values, grid, name=f"residual axisym.{name}"),
        sup=sup,
        l2=l2,
        pressure_source=pressure_source,
    )


def axisym_equations(profile: AxisymProfile) -> List[str]:
    """The four velocity-form and, with vorticity, the three vorticity-form equations."""
    names = list(_PRESSURE_EQUATIONS) + ["swirl", "continuity"]
    if profile.has_vorticity:
        names.extend(_VORTICITY_EQUATIONS)
    return names


def axisym_residual(profile: AxisymProfile) -> List[ResidualField]:
    """Residuals of every applicable cylindrical equation.

    The pressure equations use the supplied pressure or the one recovered from the
    cartesian lift; raises if that pressure cannot be recovered.
    """
    return [axisym_equation(profile, name) for name in axisym_equations(profile)]


def record_axisym_residuals(report: DiagnosticReport, profile: AxisymProfile) -> List[ResidualField]:
    """Evaluates and records every cylindrical equation on its own.

    The radial and axial equations become INCONCLUSIVE when no pressure is available;
    the other equations are still reported.
    """
    computed: List[ResidualField] = []
    for name in axisym_equations(profile):

        def build(name=name):
            residual = axisym_equation(profile, name)
            computed.append(residual)
            return axisym_residual_entry(residual)

        report.record(f"axisym.{name}", build, REFERENCES[name])
    return computed


def axisym_residual_entry(residual: ResidualField) -> ReportEntry:
    name = residual.which.split(".", 1)[1]
    tol = CONFIG.tolerance("divergence" if name == "continuity" else "residual")
    entry = ReportEntry.check(
        residual.report_name,
        REFERENCES[name],
        residual.sup,
        tol,
        l2=residual.l2,
        pressure_source=residual.pressure_source,
    )
    if entry.failed:
        entry.message = f"the {name} equation is not satisfied: interior sup {residual.sup:.3e}"
    return entry


# ---- meridional flow ----


def _meridional_rhs(profile: AxisymProfile):
    def rhs(_tau, state):
        pts = state.reshape(-1, 2)
        v = profile.meridional_velocity(np.stack([np.maximum(pts[:, 0], 0.0), pts[:, 1]], axis=-1))
        v[pts[:, 0] <= 0.0, 0] = 0.0
        return v.ravel()

    return rhs


def _angular_rate(profile: AxisymProfile, positions: np.ndarray) -> np.ndarray:
    ut = profile.U_theta.evaluate(positions)
    dut = profile.U_theta.jacobian(positions)[..., 0]
    return axis_quotient(ut, dut, positions[:, 0])


def integrate_meridional(
    profile: AxisymProfile,
    label: np.ndarray,
    taus: np.ndarray,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> MeridionalTrajectory:
    """(R, Z) by the adaptive integrator and Theta by Gauss quadrature of U_theta / R between samples."""
    label = np.asarray(label, dtype=float)
    if label[0] < 0:
        raise ValueError(f"Meridional labels need r >= 0 (got {label.tolist()}).")
    taus = np.asarray(taus, dtype=float)
    nodes = np.concatenate(
        [gauss_legendre(6, a, b)[0] for a, b in zip(taus[:-1], taus[1:])] or [np.empty(0)]
    )
    weights = [gauss_legendre(6, a, b)[1] for a, b in zip(taus[:-1], taus[1:])]
    all_taus = np.unique(np.concatenate([taus, nodes]))
    kept, states, stats = sample_ode(_meridional_rhs(profile), label, all_taus, rtol, atol)
    states[:, 0] = np.maximum(states[:, 0], 0.0)
    if label[0] == 0.0:
        states[:, 0] = 0.0
    if stats.truncated:
        LOGGER.warning(f"Meridional path of {label.tolist()} truncated: {stats.message}")

    rate = np.full(len(kept), np.nan)
    finite_r = states[:, 0] > _axis_tol()
    if label[0] == 0.0:
        finite_r[:] = True
    rate[finite_r] = _angular_rate(profile, states[finite_r])

    def lookup(values: np.ndarray) -> np.ndarray:
        idx = np.clip(np.searchsorted(kept, values), 0, len(kept) - 1)
        return np.where(kept[idx] == values, idx, -1)

    sample_idx = lookup(taus)
    have = sample_idx >= 0
    increments = np.full(len(taus) - 1, np.nan)
    for k in range(len(taus) - 1):
        idx = lookup(gauss_legendre(6, taus[k], taus[k + 1])[0])
        if np.all(idx >= 0):
            increments[k] = float(np.sum(weights[k] * rate[idx]))

    zero = int(np.argmin(np.abs(taus)))
    theta = np.zeros(len(taus))
    for j in range(zero + 1, len(taus)):
        theta[j] = theta[j - 1] + increments[j - 1]
    for j in range(zero - 1, -1, -1):
        theta[j] = theta[j + 1] - increments[j]
    divergent = bool(np.any(~np.isfinite(theta[have])))
    if divergent:
        LOGGER.warning(
            f"The angle quadrature of {label.tolist()} diverges: the path approaches the axis "
            "with unbounded U_theta / R"
        )
    return MeridionalTrajectory(
        label=label,
        taus=taus[have],
        positions=states[sample_idx[have]],
        theta=theta[have],
        stats=stats,
        theta_divergent=divergent,
    )


def meridional_flow(
    profile: AxisymProfile,
    seeds: Sequence[np.ndarray],
    tau_span: Tuple[float, float],
    num_samples: Optional[int] = None,
) -> List[MeridionalTrajectory]:
    """Meridional trajectories dR = gamma R + U_r, dZ = gamma Z + U_z, dTheta = U_theta / R.

    Axis seeds stay on the axis exactly.
    """
    taus = sample_taus(tau_span, num_samples)
    return parallel_map(
        lambda seed: integrate_meridional(profile, seed, taus), seeds, desc="Meridional paths"
    )


# ---- fixed points ----


def _swirl_verdict(gamma: float, u_theta: float) -> str:
    if abs(u_theta) <= _axis_tol():
        return ""
    if abs(gamma - 0.5) <= _axis_tol():
        return "swirling off-axis fixed point, consistent with gamma = 1/2"
    return (
        "a swirling off-axis fixed point forces gamma = 1/2; "
        f"profile with gamma = {gamma:g} is inconsistent"
    )


def _meridional_newton(profile: AxisymProfile, seed: np.ndarray) -> Optional[np.ndarray]:
    y = np.array(seed, dtype=float)
    for _ in range(int(CONFIG.get("nodal", "newton_max_iter"))):
        try:
            step = np.linalg.solve(
                profile.meridional_jacobian(y[None])[0], profile.meridional_velocity(y[None])[0]
            )
        except np.linalg.LinAlgError:
            return None
        y = y - step
        y[0] = abs(y[0])
        if not np.all(np.isfinite(y)):
            return None
        if np.linalg.norm(step) <= 1e-14 * (1.0 + np.linalg.norm(y)):
            break
    return y


def _fixed_point(profile: AxisymProfile, y: np.ndarray) -> MeridionalFixedPoint:
    on_axis = y[0] <= _axis_tol()
    if on_axis:
        y = np.array([0.0, y[1]])
    u_theta = 0.0 if on_axis else float(profile.U_theta.evaluate(y[None])[0])
    return MeridionalFixedPoint(
        location=y,
        residual=float(np.linalg.norm(profile.meridional_velocity(y[None])[0])),
        on_axis=bool(on_axis),
        eigenvalues=np.linalg.eigvals(profile.meridional_jacobian(y[None])[0]),
        U_theta=u_theta,
        circulation=2.0 * np.pi * y[0] * u_theta,
        verdict="" if on_axis else _swirl_verdict(profile.gamma, u_theta),
    )


def meridional_fixed_points(profile: AxisymProfile) -> List[MeridionalFixedPoint]:
    """Zeros of (gamma r + U_r, gamma z + U_z) in the meridional box.

    Seeds are the local minima of the meridional speed on a coarse scan, refined by a
    2D Newton iteration. The origin is tested explicitly. Each off-axis point carries
    U_theta there, the circulation of its invariant circle and the gamma = 1/2 verdict.
    """
    grid = profile.grid
    n = int(CONFIG.get("axisym", "scan_points"))
    lower = np.maximum(grid.lower, [0.0, -np.inf])
    axes = [np.linspace(lo, hi, n) for lo, hi in zip(lower, grid.upper)]
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    speed = np.linalg.norm(profile.meridional_velocity(points), axis=-1)
    lipschitz = float(np.max(np.linalg.norm(profile.meridional_jacobian(points), axis=(-2, -1))))
    h = max(a[1] - a[0] for a in axes)
    minima = speed == ndimage.minimum_filter(speed, size=3, mode="nearest")
    seeds = points[minima & (speed <= lipschitz * h)]

    scale = max(1.0, float(np.max(np.abs(np.concatenate([grid.lower, grid.upper])))))
    accept = float(CONFIG.get("nodal", "node_tolerance_factor")) * profile.gamma * scale
    dedup = float(CONFIG.get("nodal", "dedup_radius"))
    roots: List[np.ndarray] = []
    origin = np.zeros(2)
    if np.linalg.norm(profile.meridional_velocity(origin[None])[0]) <= accept:
        roots.append(origin)
    refined = parallel_map(lambda s: _meridional_newton(profile, s), seeds, desc="Newton (r, z)")
    for seed, root in zip(seeds, refined):
        if root is None or np.linalg.norm(profile.meridional_velocity(root[None])[0]) > accept:
            LOGGER.warning(f"Newton iteration from meridional seed {np.round(seed, 6).tolist()} did not converge")
            continue
        if any(np.linalg.norm(root - other) <= dedup for other in roots):
            continue
        roots.append(root)
    return [_fixed_point(profile, root) for root in roots]


def fixed_point_entries(profile: AxisymProfile, points: Sequence[MeridionalFixedPoint]) -> List[ReportEntry]:
    entries = [
        ReportEntry.info(
            "axisym.fixed_points",
            "meridional fixed points gamma r + U_r = 0, gamma z + U_z = 0",
            float(len(points)),
            message=f"isolation is heuristic: zeros closer than "
            f"{CONFIG.get('nodal', 'dedup_radius'):g} are merged",
            locations=[pt.location for pt in points],
            on_axis=[pt.on_axis for pt in points],
        )
    ]
    for index, pt in enumerate(points):
        if pt.on_axis or not pt.verdict:
            continue
        entries.append(
            ReportEntry.outcome(
                f"axisym.fixed_point[{index}].swirl",
                "a fixed point with U_theta != 0 carries an invariant circle whose circulation "
                "exp((1 - 2 gamma) tau) 2 pi r U_theta is conserved, forcing gamma = 1/2",
                abs(profile.gamma - 0.5) <= _axis_tol(),
                message=pt.verdict,
                residual=pt.U_theta,
                location=pt.location,
                circulation=pt.circulation,
            )
        )
    return entries


# ---- weighted area ----


def weighted_area(vertices: np.ndarray) -> float:
    """Signed integral of r dr dz over a polygon, exact for straight edges (boundary form of r^2 / 2 dz)."""
    r0, z0 = vertices[:, 0], vertices[:, 1]
    r1, z1 = np.roll(r0, -1), np.roll(z0, -1)
    return float(np.sum((z1 - z0) * (r0**2 + r0 * r1 + r1**2)) / 6.0)


def _advance(profile: AxisymProfile, points: np.ndarray, dt: float) -> Tuple[Optional[np.ndarray], IntegratorStats]:
    kept, states, stats = sample_ode(_meridional_rhs(profile), points.ravel(), np.array([0.0, dt]))
    reached = np.flatnonzero(kept == dt)
    if len(reached) == 0:
        return None, stats
    return states[reached[0]].reshape(-1, 2), stats


def _edge_lengths(vertices: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.roll(vertices, -1, axis=0) - vertices, axis=-1)


def advect_polygon(
    profile: AxisymProfile, vertices: np.ndarray, taus: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Advects a polygon through monotone ``taus`` (starting at 0), refining stretched edges.

    An edge longer than the cap after a step gets the midpoint of its previous position
    as a new material vertex, advected over the same step. Returns the reached taus,
    the weighted areas and the final vertices.

    Raises
    ------
    AxisContactError
        If a vertex reaches the axis.
    """
    cap = float(CONFIG.get("axisym", "edge_cap_factor")) * float(_edge_lengths(vertices).max())
    max_vertices = int(CONFIG.get("axisym", "max_vertices"))
    current = np.array(vertices, dtype=float)
    areas, reached = [weighted_area(current)], [float(taus[0])]
    for t0, t1 in zip(taus[:-1], taus[1:]):
        new, _ = _advance(profile, current, float(t1 - t0))
        if new is None:
            LOGGER.warning(f"Polygon advection stopped at tau = {t0:g}")
            break
        while len(current) < max_vertices:
            long = np.flatnonzero(_edge_lengths(new) > cap)
            if len(long) == 0:
                break
            long = long[: max_vertices - len(current)]
            mids = 0.5 * (current[long] + np.roll(current, -1, axis=0)[long])
            moved, _ = _advance(profile, mids, float(t1 - t0))
            if moved is None:
                break
            current = np.insert(current, long + 1, mids, axis=0)
            new = np.insert(new, long + 1, moved, axis=0)
        else:
            LOGGER.warning(f"Polygon refinement reached the vertex cap of {max_vertices}")
        if np.min(new[:, 0]) <= _axis_tol():
            raise AxisContactError(f"The advected polygon reaches the axis at tau = {t1:g}.")
        current = new
        areas.append(weighted_area(current))
        reached.append(float(t1))
    return np.array(reached), np.array(areas), current


def area_growth_check(
    profile: AxisymProfile,
    polygon: np.ndarray,
    tau_span: Tuple[float, float],
    num_samples: Optional[int] = None,
) -> ReportEntry:
    """max over tau of |log(area(tau) / area(0)) - 3 gamma tau| for the weighted area r dr dz."""
    polygon = np.asarray(polygon, dtype=float)
    if np.allclose(polygon[0], polygon[-1]):
        polygon = polygon[:-1]
    if polygon.ndim != 2 or polygon.shape[1] != 2 or len(polygon) < 3:
        raise ValueError("A meridional polygon needs at least three (r, z) vertices.")
    if np.min(polygon[:, 0]) <= _axis_tol():
        raise AxisContactError("The polygon must lie strictly inside r > 0.")
    area0 = weighted_area(polygon)
    if area0 == 0.0:
        raise ValueError("The polygon has zero weighted area.")
    if area0 < 0:
        polygon = polygon[::-1]
    taus = sample_taus(tau_span, num_samples)
    deviation, final_vertices, reached = 0.0, len(polygon), []
    for side in (taus[taus >= 0.0], taus[taus <= 0.0][::-1]):
        if len(side) < 2:
            continue
        side_taus, areas, final = advect_polygon(profile, polygon, side)
        growth = np.log(areas / areas[0]) - 3.0 * profile.gamma * side_taus
        deviation = max(deviation, float(np.max(np.abs(growth))))
        final_vertices = max(final_vertices, len(final))
        reached.extend([side_taus.min(), side_taus.max()])
    return ReportEntry.check(
        "axisym.area_growth",
        "d/dtau int_D(tau) r dr dz = 3 gamma int_D(tau) r dr dz",
        deviation,
        CONFIG.tolerance("area_growth"),
        initial_area=abs(area0),
        vertices=[len(polygon), final_vertices],
        tau_range=[min(reached), max(reached)],
    )


# ---- transported invariants ----

INVARIANTS = ("swirl", "azimuthal-vorticity")


def invariant_along(profile: AxisymProfile, traj: MeridionalTrajectory, which: str) -> np.ndarray:
    """exp((1 - 2 gamma) tau) R U_theta or exp((1 + gamma) tau) Omega_theta / R along a path."""
    if which == "swirl":
        return np.exp((1.0 - 2.0 * profile.gamma) * traj.taus) * traj.R * profile.U_theta.evaluate(traj.positions)
    if profile.Omega_theta is None:
        raise ValueError("The azimuthal-vorticity invariant needs Omega_theta.")
    return np.exp((1.0 + profile.gamma) * traj.taus) * profile.Omega_theta.evaluate(traj.positions) / traj.R


def axisym_invariant_check(
    profile: AxisymProfile, trajectories: Sequence[MeridionalTrajectory], which: str
) -> ReportEntry:
    """Relative drift of a transported invariant along meridional paths in r > 0.

    The invariants are exact only for solutions, so the residual of the governing
    equation is reported alongside.
    """
    if which not in INVARIANTS:
        raise ValueError(f"Unknown invariant '{which}', use one of {INVARIANTS}.")
    drift = 0.0
    for traj in trajectories:
        if np.min(traj.R) <= _axis_tol():
            raise AxisContactError(f"The path of {traj.label.tolist()} reaches the axis.")
        q = invariant_along(profile, traj, which)
        q0 = q[int(np.argmin(np.abs(traj.taus)))]
        drift = max(drift, float(np.max(np.abs(q - q0))) / max(abs(q0), 1e-12))
    equation = "swirl" if which == "swirl" else "omega_theta"
    try:
        level = axisym_equation(profile, equation).sup
    except ValueError as err:
        LOGGER.debug(f"No {equation} residual level: {err}")
        level = None
    reference = (
        "exp((1 - 2 gamma) tau) R U_theta(R, Z) is constant along meridional paths"
        if which == "swirl"
        else "exp((1 + gamma) tau) Omega_theta(R, Z) / R is constant along swirl-free meridional paths"
    )
    return ReportEntry.check(
        f"axisym.invariant.{which}",
        reference,
        drift,
        CONFIG.tolerance("invariant_drift"),
        equation_residual=level,
        paths=len(trajectories),
    )


# ---- alpha-limits ----


def bernoulli_along(profile: AxisymProfile, positions: np.ndarray) -> Optional[np.ndarray]:
    """H = |V|^2 / 2 + P + gamma (gamma - 1) (r^2 + z^2) / 2 along meridional points; None without P."""
    if profile.P is None:
        return None
    gamma = profile.gamma
    v = profile.meridional_velocity(positions)
    speed2 = np.sum(v**2, axis=-1) + profile.U_theta.evaluate(positions) ** 2
    return 0.5 * speed2 + profile.P.evaluate(positions) + 0.5 * gamma * (gamma - 1.0) * np.sum(positions**2, axis=-1)


def _trend(values: Optional[np.ndarray]) -> Optional[str]:
    if values is None:
        return None
    steps = np.diff(values)
    slack = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    if np.all(steps <= slack):
        return "non-increasing"
    if np.all(steps >= -slack):
        return "non-decreasing"
    return "mixed"


def _section_crossings(positions: np.ndarray, z_section: float) -> np.ndarray:
    """R at upward crossings of the line Z = z_section, linearly interpolated."""
    dz = positions[:, 1] - z_section
    idx = np.flatnonzero((dz[:-1] < 0) & (dz[1:] >= 0))
    frac = -dz[idx] / (dz[idx + 1] - dz[idx])
    return positions[idx, 0] + frac * (positions[idx + 1, 0] - positions[idx, 0])


def _limit_point(
    positions: np.ndarray, fixed: Sequence[MeridionalFixedPoint]
) -> Optional[MeridionalFixedPoint]:
    """The fixed point the path ends at, if its distance shrank by the convergence ratio and settled."""
    if not fixed:
        return None
    ratio = float(CONFIG.get("axisym", "convergence_ratio"))
    dists = np.array([np.linalg.norm(positions - fp.location, axis=-1) for fp in fixed])
    nearest = int(np.argmin(dists[:, -1]))
    d = dists[nearest]
    tail = d[-max(2, len(d) // 4):]
    settled = np.all(np.diff(tail) <= 1e-12 * max(1.0, float(tail.max())))
    if d[-1] <= ratio * max(d[0], 1e-300) and settled:
        return fixed[nearest]
    return None


def _classify(
    traj: MeridionalTrajectory,
    fixed: Sequence[MeridionalFixedPoint],
) -> Tuple[str, Optional[MeridionalFixedPoint], int]:
    """Classification of the tau -> -inf end of a path whose samples run from tau = 0 backward."""
    positions = traj.positions[::-1]
    limit = _limit_point(positions, fixed)
    if limit is not None:
        return ("axis-fixed-point" if limit.on_axis else "off-axis-fixed-point"), limit, 0
    if np.linalg.norm(positions[-1]) >= float(CONFIG.get("axisym", "escape_radius")):
        return "escaped", None, 0
    crossings = _section_crossings(positions, traj.label[1])
    tol = float(CONFIG.get("axisym", "recurrence_tolerance"))
    gaps = np.abs(np.diff(crossings))
    if len(crossings) >= 3 and np.any(gaps <= tol * np.maximum(1.0, np.abs(crossings[1:]))):
        return "cycling", None, len(crossings)
    return "undecided", None, len(crossings)


def backward_alpha_limit(
    profile: AxisymProfile,
    seed: np.ndarray,
    tau_min: Optional[float] = None,
    num_samples: int = 401,
    fixed_points: Optional[Sequence[MeridionalFixedPoint]] = None,
) -> AlphaLimitResult:
    """Integrates a meridional path backward to tau_min and classifies where it accumulates.

    For gamma < 1/2 backward paths are bounded when the superlevel sets of H are; for
    gamma >= 1/2 the classification still runs without that guarantee.
    """
    seed = np.asarray(seed, dtype=float)
    if not seed[0] > 0:
        raise ValueError(f"Alpha-limit seeds need r > 0 (got {seed.tolist()}).")
    tau_min = float(CONFIG.get("axisym", "tau_min") if tau_min is None else tau_min)
    if not tau_min < 0:
        raise ValueError(f"tau_min must be negative (got {tau_min}).")
    fixed = meridional_fixed_points(profile) if fixed_points is None else fixed_points
    traj = integrate_meridional(profile, seed, np.linspace(tau_min, 0.0, num_samples))
    classification, limit, crossings = _classify(traj, fixed)
    if traj.stats.truncated and classification != "escaped":
        classification, limit = "undecided", None
    return AlphaLimitResult(
        classification=classification,
        fixed_point=None if limit is None else limit.location,
        min_axis_distance=float(np.min(traj.R)),
        bernoulli_trend=_trend(bernoulli_along(profile, traj.positions)),
        bounded_guarantee=profile.gamma < 0.5,
        crossings=crossings,
        tau_reached=float(traj.taus.min()),
    )


def alpha_limit_entry(result: AlphaLimitResult) -> ReportEntry:
    reference = (
        "for gamma < 1/2 the backward orbit is bounded and its alpha-limit is a single "
        "axis fixed point"
    )
    details = dict(
        classification=result.classification,
        fixed_point=result.fixed_point,
        min_axis_distance=result.min_axis_distance,
        bernoulli_trend=result.bernoulli_trend,
        tau_reached=result.tau_reached,
    )
    note = "" if result.bounded_guarantee else "gamma >= 1/2: no boundedness guarantee; "
    if result.classification == "axis-fixed-point":
        return ReportEntry.info(
            "axisym.alpha_limit", reference, message=f"{note}converged to axis fixed point", **details
        )
    if result.classification == "off-axis-fixed-point":
        return ReportEntry.outcome(
            "axisym.alpha_limit",
            reference,
            False,
            message=f"{note}converged to an off-axis fixed point",
            **details,
        )
    if result.classification == "cycling" and result.bounded_guarantee:
        return ReportEntry.outcome(
            "axisym.alpha_limit",
            reference,
            False,
            message="recurrent backward orbit: H would strictly decrease over one period",
            **details,
        )
    return ReportEntry.inconclusive(
        "axisym.alpha_limit", reference, f"{note}{result.classification}", **details
    )


def orbit_connection_check(
    profile: AxisymProfile,
    seed: np.ndarray,
    tau_span: Tuple[float, float],
    num_samples: int = 401,
) -> ReportEntry:
    """Integrates a meridional path both ways and flags orbits joining two axis fixed points.

    When all fixed points lie on the axis, an exact profile with gamma < 1/2 has no such
    heteroclinic or homoclinic orbit.
    """
    seed = np.asarray(seed, dtype=float)
    fixed = meridional_fixed_points(profile)
    t0, t1 = float(min(tau_span)), float(max(tau_span))
    if not (t0 < 0 < t1):
        raise ValueError(f"The tau span must contain 0 in its interior (got {tau_span}).")
    backward = integrate_meridional(profile, seed, np.linspace(t0, 0.0, num_samples))
    forward = integrate_meridional(profile, seed, np.linspace(0.0, t1, num_samples))
    start = _limit_point(backward.positions[::-1], fixed)
    end = _limit_point(forward.positions, fixed)
    connected = (
        start is not None
        and end is not None
        and start.on_axis
        and end.on_axis
        and all(fp.on_axis for fp in fixed)
    )
    reference = "with all fixed points on the axis, no orbit connects axis fixed points"
    details = dict(
        alpha=None if start is None else start.location,
        omega=None if end is None else end.location,
        all_on_axis=all(fp.on_axis for fp in fixed),
    )
    if connected:
        kind = "homoclinic" if np.allclose(start.location, end.location) else "heteroclinic"
        return ReportEntry.outcome(
            "axisym.orbit_connection", reference, False, message=f"{kind} orbit between axis fixed points", **details
        )
    return ReportEntry.info("axisym.orbit_connection", reference, message="no connecting orbit detected", **details)


# ---- axis outgoing property and compatibility ----


def _omega_z_on_axis(profile: AxisymProfile, z: float) -> float:
    point = np.array([[0.0, z]])
    if profile.Omega_z is not None:
        return float(profile.Omega_z.evaluate(point)[0])
    return 2.0 * float(profile.U_theta.jacobian(point)[0, 0])


def axis_outgoing_certificate(profile: AxisymProfile, z_star: float, eps_star: float) -> List[ReportEntry]:
    """Samples r V_r + (z - z_*) V_z >= c_* (r^2 + (z - z_*)^2) on half circles around (0, z_*).

    Raises
    ------
    ValueError
        If (0, z_*) is not a zero of the meridional velocity or eps_star is not positive.
    """
    if not eps_star > 0:
        raise ValueError(f"The certification radius must be positive (got {eps_star}).")
    node = np.array([0.0, z_star])
    speed = float(np.linalg.norm(profile.meridional_velocity(node[None])[0]))
    accept = float(CONFIG.get("nodal", "node_tolerance_factor")) * profile.gamma * max(1.0, abs(z_star))
    if speed > accept:
        raise ValueError(f"(0, {z_star:g}) is not an axis nodal point: |V| = {speed:.3e}.")
    dirs = half_circle_directions(int(CONFIG.get("flow", "sphere_points")))
    radii = eps_star * np.array([0.125, 0.25, 0.5, 1.0])
    offsets = radii[:, None, None] * dirs[None, :, :]
    v = profile.meridional_velocity(node + offsets)
    ratios = np.sum(v * dirs[None, :, :], axis=-1) / radii[:, None]
    c_raw = float(ratios.min())
    c_star = max(c_raw, 0.0)
    omega_z = _omega_z_on_axis(profile, z_star)
    omega_nonzero = abs(omega_z) > float(CONFIG.get("vanishing", "threshold"))
    entries = [
        ReportEntry.outcome(
            "axisym.axis_outgoing",
            "axisymmetric outgoing property r V_r + (z - z_*) V_z >= c_* (r^2 + (z - z_*)^2) "
            "(empirical certificate)",
            c_raw > 0,
            message=f"c_* = {c_raw:.6g} from {ratios.size} samples within {eps_star:g}",
            residual=c_raw,
            z_star=z_star,
            omega_z=omega_z,
            omega_nonzero=omega_nonzero,
        )
    ]
    if c_raw > 0:
        entries.append(
            ReportEntry.info(
                "axisym.axis_gamma_bound",
                "the outgoing property at an axis nodal point with Omega_z != 0 implies gamma >= 1/2 + c_*",
                0.5 + c_star,
                message=f"profile gamma = {profile.gamma:g}"
                + ("" if omega_nonzero else "; Omega_z vanishes at the nodal point"),
            )
        )
    return entries


def _relative_deviation(supplied: np.ndarray, derived: np.ndarray, mask: np.ndarray, scale: float) -> float:
    return float(np.max(np.abs(supplied - derived)[mask], initial=0.0)) / max(scale, 1e-300)


def profile_compatibility(profile: AxisymProfile) -> List[ReportEntry]:
    """Axis vanishing of U_r, U_theta (and Omega_r, Omega_theta), Omega derived from U, and |U_theta|_inf."""
    grid = profile.grid
    points = grid.points()
    ut, gut = _component_data(profile.U_theta, profile, points)
    entries: List[ReportEntry] = [
        ReportEntry.info(
            "axisym.swirl_sup",
            "the swirl of a smooth axisymmetric collapse cannot vanish identically",
            float(np.max(np.abs(ut))),
        )
    ]
    tol = CONFIG.tolerance("consistency")
    if grid.touches_axis or profile.U_r.is_analytic:
        axis = np.stack([np.zeros(grid.dims[1]), grid.axes()[1]], axis=-1)
        names = ["U_r", "U_theta"] + (["Omega_r", "Omega_theta"] if profile.has_vorticity else [])
        comps: Dict[str, Optional[FieldSource]] = profile.components()
        worst = max(
            float(np.max(np.abs(comps[name].evaluate(axis)))) if comps[name] is not None else 0.0
            for name in names
        )
        entries.append(
            ReportEntry.check(
                "axisym.axis_vanishing",
                "U_r, U_theta, Omega_r and Omega_theta vanish on the symmetry axis",
                worst,
                tol,
                components=names,
            )
        )
    else:
        entries.append(
            ReportEntry.info("axisym.axis_vanishing", "axis vanishing", message="the grid does not reach the axis")
        )
    if not profile.has_vorticity:
        entries.append(
            ReportEntry.info("axisym.omega_compat", "Omega derived from U", message="no vorticity components")
        )
        return entries
    mask = grid.interior_mask(int(CONFIG.get("numerics", "interior_width")))
    _, gur = _component_data(profile.U_r, profile, points)
    _, guz = _component_data(profile.U_z, profile, points)
    derived = {
        "Omega_r": -gut[..., 1],
        "Omega_theta": gur[..., 1] - guz[..., 0],
        "Omega_z": gut[..., 0] + axis_quotient(ut, gut[..., 0], points[..., 0]),
    }
    supplied = {name: _component_data(profile.components()[name], profile, points)[0] for name in derived}
    scale = max(float(np.max(np.abs(v))) for v in supplied.values())
    deviation = max(_relative_deviation(supplied[n], derived[n], mask, scale) for n in derived)
    entries.append(
        ReportEntry.check(
            "axisym.omega_compat",
            "Omega_r = -d_z U_theta, Omega_theta = d_z U_r - d_r U_z, Omega_z = d_r U_theta + U_theta / r",
            deviation,
            tol,
        )
    )
    return entries
