"""Flow-map identities along self-similar trajectories: Jacobian determinant, Cauchy and
Weber formulas, circulation, Bernoulli monotonicity and the global outgoing property."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..classes import BernoulliData, Loop, NormRequest, Profile, ReportEntry, Trajectory
from ..classes.loop import polyline_is_simple
from ..constants import CONFIG, VERDICT_FAIL
from ..logger import LOGGER
from ..util import parallel_map
from .integration import integrate_label, sample_taus, transport_velocity
from .nodal import gamma_bound_entry
from .normalization import vorticity_of
from .norms import field_norm
from .selfsim import bernoulli_field, pressure_of, selfsim_residual

IDENTITIES = ("jacobian-det", "cauchy", "weber")

_REFERENCES = {
    "jacobian-det": "det(grad_a Y)(a, tau) = exp(3 gamma tau)",
    "cauchy": "Cauchy formula Omega(Y(a, tau)) = exp(-(1 + gamma) tau) grad_a Y Omega(a)",
    "weber": "Weber formula: exp((1 - 2 gamma) tau) (grad_a Y)^T U(Y) - U(a) is a gradient",
}


def _jacobian_det_entry(profile: Profile, trajectories: Sequence[Trajectory]) -> ReportEntry:
    gamma = profile.gamma
    deviation, orientation = 0.0, True
    for traj in trajectories:
        det = traj.determinants()
        orientation &= bool(np.all(det > 0))
        deviation = max(deviation, float(np.max(np.abs(det * np.exp(-3.0 * gamma * traj.taus) - 1.0))))
    entry = ReportEntry.check(
        "flow.jacobian_det",
        _REFERENCES["jacobian-det"],
        deviation,
        CONFIG.tolerance("jacobian_det"),
        trajectories=len(trajectories),
        orientation_preserving=orientation,
    )
    if not orientation:
        entry.verdict = VERDICT_FAIL
        entry.message = "det(grad_a Y) changed sign"
    return entry


def _vorticity_level(profile: Profile) -> Optional[float]:
    try:
        return selfsim_residual(profile, "vorticity-form").sup
    except ValueError as err:
        LOGGER.debug(f"No vorticity residual level available: {err}")
        return None


def _cauchy_entry(profile: Profile, trajectories: Sequence[Trajectory]) -> ReportEntry:
    if profile.Omega is None:
        raise ValueError("The Cauchy formula check needs a vorticity profile.")
    gamma = profile.gamma
    omega = profile.Omega
    scale = max(field_norm(omega, NormRequest(kind="sup"), profile.grid).value, 1e-300)
    worst = 0.0
    for traj in trajectories:
        omega_a = omega.evaluate(traj.label[None])[0]
        transported = np.exp(-(1.0 + gamma) * traj.taus)[:, None] * (traj.jacobians @ omega_a)
        worst = max(worst, float(np.max(np.linalg.norm(omega.evaluate(traj.positions) - transported, axis=-1))))
    return ReportEntry.check(
        "flow.cauchy",
        _REFERENCES["cauchy"],
        worst / scale,
        CONFIG.tolerance("cauchy"),
        vorticity_residual=_vorticity_level(profile),
    )


def weber_field(profile: Profile, traj: Trajectory) -> np.ndarray:
    """W(a, tau) = exp((1 - 2 gamma) tau) (grad_a Y)^T U(Y) - U(a), shape (n, 3)."""
    factor = np.exp((1.0 - 2.0 * profile.gamma) * traj.taus)[:, None]
    pulled = np.einsum("nji,nj->ni", traj.jacobians, profile.U.evaluate(traj.positions))
    return factor * pulled - profile.U.evaluate(traj.label[None])[0]


def weber_curl(profile: Profile, traj: Trajectory, spacing: Optional[float] = None) -> np.ndarray:
    """Central-difference curl of W over the label patch a +- h e_i; shape (n, 3)."""
    h = float(CONFIG.get("flow", "weber_spacing") if spacing is None else spacing)
    if not h > 0:
        raise ValueError(f"The label spacing must be positive (got {h}).")
    grads = np.zeros((len(traj.taus), 3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        plus = integrate_label(profile, traj.label + step, traj.taus)
        minus = integrate_label(profile, traj.label - step, traj.taus)
        n = min(len(plus.taus), len(minus.taus), len(traj.taus))
        grads[:n, :, j] = (weber_field(profile, plus)[:n] - weber_field(profile, minus)[:n]) / (2.0 * h)
    # grads[..., k, j] = d_j W_k
    return np.stack(
        [
            grads[:, 2, 1] - grads[:, 1, 2],
            grads[:, 0, 2] - grads[:, 2, 0],
            grads[:, 1, 0] - grads[:, 0, 1],
        ],
        axis=-1,
    )


def _weber_entry(profile: Profile, trajectories: Sequence[Trajectory]) -> ReportEntry:
    curls = parallel_map(lambda traj: weber_curl(profile, traj), trajectories, desc="Weber patches")
    growth = [float(np.linalg.norm(c[-1])) for c in curls]
    worst = max((float(np.max(np.linalg.norm(c, axis=-1))) for c in curls), default=0.0)
    return ReportEntry.check(
        "flow.weber",
        _REFERENCES["weber"],
        worst,
        CONFIG.tolerance("weber"),
        final_curl=growth,
        spacing=float(CONFIG.get("flow", "weber_spacing")),
    )


def flow_identity_check(
    profile: Profile, trajectories: Sequence[Trajectory], which: str
) -> ReportEntry:
    """Residual of one flow-map identity over all trajectory samples.

    'jacobian-det' holds for every divergence-free U; 'cauchy' and 'weber' only for exact
    solutions, so they are reported next to the profile's vorticity residual.
    """
    if which not in IDENTITIES:
        raise ValueError(f"Unknown identity '{which}', use one of {IDENTITIES}.")
    if any(traj.jacobians is None for traj in trajectories):
        raise ValueError("Flow identities need trajectories integrated with their jacobian.")
    if which == "jacobian-det":
        return _jacobian_det_entry(profile, trajectories)
    if which == "cauchy":
        return _cauchy_entry(profile, trajectories)
    return _weber_entry(profile, trajectories)


# ---- circulation ----


def circulation(profile: Profile, vertices: np.ndarray, orientation: int = 1) -> float:
    """Trapezoidal line integral of U along the closed polyline (first vertex repeated last)."""
    u = profile.U.evaluate(vertices)
    segments = np.diff(vertices, axis=0)
    return orientation * float(np.sum(0.5 * (u[:-1] + u[1:]) * segments))


def advect_loop(
    profile: Profile, loop: Loop, taus: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Positions of all loop vertices at the common taus, shape (n_tau, n_vertices + 1, 3)."""
    trajectories = parallel_map(
        lambda vertex: integrate_label(profile, vertex, taus, with_jacobian=False),
        loop.distinct_vertices,
        desc="Advecting loop",
    )
    common = trajectories[0].taus
    for traj in trajectories[1:]:
        common = np.intersect1d(common, traj.taus)
    positions = np.stack(
        [traj.positions[np.searchsorted(traj.taus, common)] for traj in trajectories], axis=1
    )
    return common, np.concatenate([positions, positions[:, :1]], axis=1)


def circulation_check(
    profile: Profile,
    loop: Loop,
    tau_span: Tuple[float, float],
    num_samples: Optional[int] = None,
) -> ReportEntry:
    """max |exp((1 - 2 gamma) tau) Gamma(tau) - Gamma(0)| / max(|Gamma(0)|, 1e-12) along the advected loop."""
    taus, positions = advect_loop(profile, loop, sample_taus(tau_span, num_samples))
    values = np.array([circulation(profile, pos, loop.orientation) for pos in positions])
    gamma0 = values[np.argmin(np.abs(taus))]
    scaled = np.exp((1.0 - 2.0 * profile.gamma) * taus) * values
    deviation = float(np.max(np.abs(scaled - gamma0))) / max(abs(gamma0), 1e-12)
    simple = polyline_is_simple(positions[-1])
    if not simple:
        LOGGER.warning("The advected loop is no longer simple; the circulation is still defined.")
    return ReportEntry.check(
        "flow.circulation",
        "self-similar Kelvin theorem: exp((1 - 2 gamma) tau) Gamma(C(tau)) = Gamma(C(0))",
        deviation,
        CONFIG.tolerance("circulation"),
        message="" if simple else "advected loop self-intersects",
        initial_circulation=gamma0,
        tau_range=[float(taus.min()), float(taus.max())],
        vertices=loop.num_vertices,
        simple=simple,
    )


# ---- Bernoulli monotonicity and outgoing property ----


def bernoulli_monotonicity_check(
    profile: Profile,
    trajectories: Sequence[Trajectory],
    data: Optional[BernoulliData] = None,
) -> List[ReportEntry]:
    """Sign of dH/dtau along trajectories and the residual of dH/dtau = (2 gamma - 1) |V|^2.

    For gamma < 1/2 the Bernoulli function must not increase along trajectories, for
    gamma > 1/2 it must not decrease; gamma = 1/2 carries no sign statement. The identity
    residual is informational because the identity only holds for exact solutions.
    """
    gamma = profile.gamma
    H = data.H if data is not None else bernoulli_field(profile, pressure_of(profile)[0])
    tol = CONFIG.tolerance("bernoulli_monotone")
    worst_step, identity = 0.0, 0.0
    sign = np.sign(2.0 * gamma - 1.0)
    for traj in trajectories:
        h = H.evaluate(traj.positions)
        scale = max(1.0, float(np.max(np.abs(h))))
        if sign != 0:
            # positive entries are steps against the predicted direction
            worst_step = max(worst_step, float(np.max(-sign * np.diff(h), initial=0.0)) / scale)
        v = transport_velocity(profile, traj.positions)
        rate = np.sum(H.jacobian(traj.positions) * v, axis=-1)
        identity = max(identity, float(np.max(np.abs(rate - (2.0 * gamma - 1.0) * np.sum(v**2, axis=-1)))))
    reference = "dH(Y)/dtau = (2 gamma - 1) |V(Y)|^2, so H is monotone along trajectories"
    if sign == 0:
        monotone = ReportEntry.info(
            "flow.bernoulli_monotone", reference, message="gamma = 1/2: no sign statement"
        )
    else:
        monotone = ReportEntry.check(
            "flow.bernoulli_monotone",
            reference,
            worst_step,
            tol,
            direction="non-increasing" if sign < 0 else "non-decreasing",
        )
    return [
        monotone,
        ReportEntry.info(
            "flow.bernoulli_identity",
            reference,
            identity,
            message="identity residual (valid for exact solutions only)",
        ),
    ]


def global_outgoing_check(profile: Profile) -> ReportEntry:
    """c_* = min over grid nodes y != 0 of V(y).y / |y|^2 and the implied bound gamma >= 1/2 + c_*.

    The global property leaves the origin as the only nodal point, so the bound is judged
    when Omega(0) != 0 and reported as information otherwise.
    """
    points = profile.grid.points().reshape(-1, 3)
    r2 = np.sum(points**2, axis=-1)
    keep = r2 > 0
    v = transport_velocity(profile, points[keep])
    ratios = np.sum(v * points[keep], axis=-1) / r2[keep]
    c_star = float(ratios.min())
    holds = c_star > 0
    details = dict(
        holds=holds,
        implied_gamma_bound=0.5 + c_star if holds else None,
        argmin=points[keep][int(np.argmin(ratios))],
    )
    reference = "global outgoing property V(y).y >= c_* |y|^2 implies gamma >= 1/2 + c_*"
    if not holds:
        return ReportEntry.info(
            "flow.global_outgoing",
            reference,
            c_star,
            message="the global outgoing property does not hold on the grid",
            **details,
        )
    omega = vorticity_of(profile)
    omega_sup = field_norm(omega, NormRequest(kind="sup"), profile.grid).value
    omega_origin = float(np.linalg.norm(omega.evaluate(np.zeros((1, 3)))[0]))
    if omega_origin > float(CONFIG.get("numerics", "direction_threshold")) * omega_sup:
        return gamma_bound_entry(
            "flow.global_outgoing", profile.gamma, 0.5 + c_star, True, reference, c_star=c_star, **details
        )
    return ReportEntry.info(
        "flow.global_outgoing",
        reference,
        c_star,
        message=f"outgoing with c_* = {c_star:.6g}: requires gamma >= {0.5 + c_star:.6g} where Omega(0) != 0",
        **details,
    )
