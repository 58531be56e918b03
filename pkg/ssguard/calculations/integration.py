"""Self-similar Lagrangian trajectories dY/dtau = V(Y) with the variational equation."""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..classes import IntegratorStats, Profile, Trajectory
from ..constants import CONFIG
from ..logger import LOGGER
from ..util import parallel_map

Rhs = Callable[[float, np.ndarray], np.ndarray]


def transport_velocity(profile, y: np.ndarray) -> np.ndarray:
    """V(y) = gamma y + U(y); works for single points (3,) and arrays (..., 3)."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        return profile.gamma * y + profile.U.evaluate(y[None])[0]
    return profile.gamma * y + profile.U.evaluate(y)


def sample_taus(tau_span: Tuple[float, float], num_samples: Optional[int] = None) -> np.ndarray:
    """Evenly spaced samples over the span, always including tau = 0."""
    t0, t1 = float(tau_span[0]), float(tau_span[1])
    if not (np.isfinite(t0) and np.isfinite(t1)) or t0 == t1:
        raise ValueError(f"The tau span must be finite and non-empty (got {tau_span}).")
    lo, hi = min(t0, t1), max(t0, t1)
    n = int(CONFIG.get("flow", "num_samples") if num_samples is None else num_samples)
    if n < 2:
        raise ValueError(f"Need at least 2 tau samples (got {n}).")
    return np.unique(np.concatenate([np.linspace(lo, hi, n), [0.0]]))


def _solve_from_zero(
    rhs: Rhs, state0: np.ndarray, t_end: float, rtol: float, atol: float
) -> Tuple[object, IntegratorStats]:
    sol = solve_ivp(
        rhs, (0.0, t_end), state0, method="DOP853", dense_output=True, rtol=rtol, atol=atol
    )
    stats = IntegratorStats(
        steps=max(len(sol.t) - 1, 0),
        nfev=int(sol.nfev),
        rtol=rtol,
        atol=atol,
        truncated=not sol.success,
        message="" if sol.success else str(sol.message),
    )
    return sol, stats


def sample_ode(
    rhs: Rhs,
    state0: np.ndarray,
    taus: np.ndarray,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray, IntegratorStats]:
    """Integrates an autonomous ODE from tau = 0 to both ends of ``taus``.

    Spans containing 0 in their interior are integrated forward and backward from 0.
    On failure the samples beyond the last accepted step are dropped and the stats are
    flagged as truncated. Returns the kept taus, the states of shape (n, dim) and the stats.
    """
    rtol = float(CONFIG.get("flow", "rtol") if rtol is None else rtol)
    atol = float(CONFIG.get("flow", "atol") if atol is None else atol)
    taus = np.asarray(taus, dtype=float)
    state0 = np.asarray(state0, dtype=float)
    stats = IntegratorStats(rtol=rtol, atol=atol)
    kept = [taus == 0.0]
    states = np.full((len(taus), len(state0)), np.nan)
    states[taus == 0.0] = state0
    for end in (taus.min(), taus.max()):
        if end == 0.0:
            continue
        sol, part = _solve_from_zero(rhs, state0, float(end), rtol, atol)
        stats = stats.merged(part)
        reached = float(sol.t[-1])
        side = (taus > 0.0) if end > 0 else (taus < 0.0)
        if part.truncated:
            # the last accepted step sits at the singularity; keep only samples before it
            within = side & (np.abs(taus) < abs(reached))
        else:
            within = side & (np.abs(taus) <= abs(reached) + 1e-14 * max(1.0, abs(reached)))
        if np.any(within):
            states[within] = sol.sol(taus[within]).T
        kept.append(within)
    keep = np.logical_or.reduce(kept)
    return taus[keep], states[keep], stats


def _flow_rhs(profile: Profile, with_jacobian: bool) -> Rhs:
    gamma = profile.gamma
    velocity = profile.U

    def rhs(_tau, state):
        y = state[:3]
        dy = gamma * y + velocity.evaluate(y[None])[0]
        if not with_jacobian:
            return dy
        grad_v = velocity.jacobian(y[None])[0] + gamma * np.eye(3)
        dm = grad_v @ state[3:].reshape(3, 3)
        return np.concatenate([dy, dm.ravel()])

    return rhs


def integrate_label(
    profile: Profile,
    label: np.ndarray,
    taus: np.ndarray,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    with_jacobian: bool = True,
) -> Trajectory:
    label = np.asarray(label, dtype=float)
    state0 = np.concatenate([label, np.eye(3).ravel()]) if with_jacobian else label
    kept, states, stats = sample_ode(_flow_rhs(profile, with_jacobian), state0, taus, rtol, atol)
    if stats.truncated:
        LOGGER.warning(
            f"Trajectory of label {label.tolist()} truncated to tau in "
            f"[{kept.min():.4g}, {kept.max():.4g}]: {stats.message}"
        )
    return Trajectory(
        label=label,
        taus=kept,
        positions=states[:, :3],
        jacobians=states[:, 3:].reshape(-1, 3, 3) if with_jacobian else None,
        stats=stats,
    )


def integrate_flow(
    profile: Profile,
    labels: Sequence[np.ndarray],
    tau_span: Tuple[float, float],
    tolerance: Optional[float] = None,
    num_samples: Optional[int] = None,
    with_jacobian: bool = True,
) -> List[Trajectory]:
    """Integrates dY/dtau = V(Y) and d(grad_a Y)/dtau = grad V(Y) grad_a Y for every label.

    Uses the embedded Dormand-Prince 8(5,3) pair with dense output; ``tolerance`` sets
    the relative tolerance (absolute tolerance is 1e-2 of it), negative taus integrate
    the backward flow. Labels run in parallel on the thread pool.
    """
    taus = sample_taus(tau_span, num_samples)
    if tolerance is None:
        rtol, atol = float(CONFIG.get("flow", "rtol")), float(CONFIG.get("flow", "atol"))
    else:
        rtol, atol = float(tolerance), 1e-2 * float(tolerance)
    if not rtol > 0:
        raise ValueError(f"The integrator tolerance must be positive (got {rtol}).")
    return parallel_map(
        lambda label: integrate_label(profile, label, taus, rtol, atol, with_jacobian),
        labels,
        desc="Integrating trajectories",
    )
