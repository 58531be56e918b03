"""Zeros of the transport velocity, local outgoing certificates and vanishing orders."""

import dataclasses
from typing import List, Optional, Sequence

import numpy as np
from scipy import ndimage

from ..classes import NodalPoint, NormRequest, Profile, ReportEntry, VanishingOrder
from ..constants import CONFIG
from ..errors import NotVanishingError, ShrinkRadiusError
from ..logger import LOGGER
from ..util import parallel_map
from .envelope import decay_envelope
from .fitting import fit_power_law
from .integration import transport_velocity
from .normalization import vorticity_of
from .norms import field_norm
from .quadrature import fibonacci_sphere
from .selfsim import r_flat


def _flat_radius(profile: Profile, c_flat: Optional[float]) -> float:
    if c_flat is None:
        c_flat = profile.c_flat
    if c_flat is None:
        c_flat = decay_envelope(profile).c_flat
    return r_flat(c_flat, profile.gamma)


def _transport_jacobian(profile: Profile, y: np.ndarray) -> np.ndarray:
    return profile.U.jacobian(y[None])[0] + profile.gamma * np.eye(3)


def _newton(profile: Profile, seed: np.ndarray) -> Optional[np.ndarray]:
    """Newton iteration for V(y) = 0; None if the jacobian is singular or the iteration stalls."""
    y = np.array(seed, dtype=float)
    for _ in range(int(CONFIG.get("nodal", "newton_max_iter"))):
        try:
            step = np.linalg.solve(_transport_jacobian(profile, y), transport_velocity(profile, y))
        except np.linalg.LinAlgError:
            return None
        y = y - step
        if not np.all(np.isfinite(y)):
            return None
        if np.linalg.norm(step) <= 1e-14 * (1.0 + np.linalg.norm(y)):
            break
    return y


def _strain_data(profile: Profile, y: np.ndarray):
    jac = profile.U.jacobian(y[None])[0]
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (jac + jac.T))
    return eigenvalues, eigenvectors


def _nodal_point(profile: Profile, y: np.ndarray) -> NodalPoint:
    eigenvalues, eigenvectors = _strain_data(profile, y)
    omega = vorticity_of(profile).evaluate(y[None])[0]
    return NodalPoint(
        location=y,
        residual=float(np.linalg.norm(transport_velocity(profile, y))),
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        omega=omega,
    )


def scan_seeds(profile: Profile, radius: float) -> np.ndarray:
    """Local minima of |V| on a coarse scan of the ball B_radius, below the seed threshold Lip * h."""
    n = int(CONFIG.get("nodal", "scan_points"))
    axis = np.linspace(-radius, radius, n)
    h = axis[1] - axis[0]
    points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
    speed = np.linalg.norm(transport_velocity(profile, points), axis=-1)
    inside = np.linalg.norm(points, axis=-1) <= radius + 0.5 * h
    lipschitz = float(
        np.max(np.linalg.norm(profile.U.jacobian(points[inside]) + profile.gamma * np.eye(3), axis=(-2, -1)))
    )
    speed = np.where(inside, speed, np.inf)
    minima = (speed == ndimage.minimum_filter(speed, size=3, mode="nearest")) & inside
    minima &= speed <= lipschitz * h
    return points[minima]


def nodal_set(profile: Profile, c_flat: Optional[float] = None) -> List[NodalPoint]:
    """Zeros of V = gamma y + U inside B_{R_flat}.

    Seeds are local minima of |V| on a coarse scan, refined by Newton's method with the
    jacobian gamma I + grad U; points closer than the dedup radius are merged. The origin
    is included exactly whenever U(0) vanishes. Seeds whose iteration fails are dropped
    and logged.
    """
    radius = _flat_radius(profile, c_flat)
    gamma = profile.gamma
    accept = float(CONFIG.get("nodal", "node_tolerance_factor")) * gamma * radius
    dedup = float(CONFIG.get("nodal", "dedup_radius"))
    seeds = scan_seeds(profile, radius)
    LOGGER.debug(f"Nodal scan in B_{radius:.4g}: {len(seeds)} seeds")

    roots: List[np.ndarray] = []
    if np.linalg.norm(transport_velocity(profile, np.zeros(3))) <= accept:
        roots.append(np.zeros(3))

    for seed, root in zip(seeds, parallel_map(lambda s: _newton(profile, s), seeds, desc="Newton")):
        if root is None or np.linalg.norm(transport_velocity(profile, root)) > accept:
            LOGGER.warning(f"Newton iteration from seed {np.round(seed, 6).tolist()} did not converge")
            continue
        if np.linalg.norm(root) > radius + dedup:
            LOGGER.warning(f"Discarding zero {root.tolist()} outside B_R_flat (R_flat = {radius:.4g})")
            continue
        if any(np.linalg.norm(root - other) <= dedup for other in roots):
            continue
        roots.append(root)

    if len(roots) > int(CONFIG.get("nodal", "max_points")):
        LOGGER.warning(f"{len(roots)} distinct zeros of V found: possibly non-isolated zeros")
    return [_nodal_point(profile, root) for root in roots]


def local_vorticity_residual(profile: Profile, y: np.ndarray) -> float:
    """|Omega + grad Omega V - grad U Omega| at a single point."""
    omega_field = vorticity_of(profile)
    omega = omega_field.evaluate(y[None])[0]
    residual = (
        omega
        + omega_field.jacobian(y[None])[0] @ transport_velocity(profile, y)
        - profile.U.jacobian(y[None])[0] @ omega
    )
    return float(np.linalg.norm(residual))


def outgoing_certificate(
    profile: Profile,
    point: NodalPoint,
    eps_star: float,
    others: Sequence[NodalPoint] = (),
) -> NodalPoint:
    """Empirical certificate of V(y).(y - y_*) >= c_* |y - y_*|^2 on |y - y_*| <= eps_star.

    c_* is the minimum of V(y).(y - y_*) / |y - y_*|^2 over the radii eps/8, eps/4, eps/2
    and eps times a Fibonacci sphere (plus the coordinate axes); a negative minimum is
    clamped to 0 and the property fails. Also reports whether Omega(y_*) != 0, whether
    (1, Xi(y_*)) is an eigenpair of the strain, the eigenvalue window
    [c_* - gamma, 2 (gamma - c_*)] and the implied bound gamma >= 1/2 + c_*.

    Raises
    ------
    ShrinkRadiusError
        If another nodal point lies within eps_star.
    """
    if not eps_star > 0:
        raise ValueError(f"The certification radius must be positive (got {eps_star}).")
    y_star = point.location
    dedup = float(CONFIG.get("nodal", "dedup_radius"))
    for other in others:
        dist = float(np.linalg.norm(other.location - y_star))
        if dedup < dist <= eps_star:
            raise ShrinkRadiusError(
                f"The ball of radius {eps_star:g} around {y_star.tolist()} contains the nodal "
                f"point {other.location.tolist()}; shrink eps_star below {dist:.4g}."
            )
    gamma = profile.gamma
    dirs = fibonacci_sphere(int(CONFIG.get("flow", "sphere_points")), include_axes=True)
    radii = eps_star * np.array([0.125, 0.25, 0.5, 1.0])
    offsets = radii[:, None, None] * dirs[None, :, :]
    v = transport_velocity(profile, y_star + offsets)
    ratios = np.sum(v * dirs[None, :, :], axis=-1) / radii[:, None]
    c_raw = float(ratios.min())
    c_star = max(c_raw, 0.0)
    outgoing = c_raw > 0

    omega = vorticity_of(profile)
    omega_sup = field_norm(omega, NormRequest(kind="sup"), profile.grid).value
    omega_here = omega.evaluate(y_star[None])[0]
    omega_norm = float(np.linalg.norm(omega_here))
    omega_nonzero = omega_norm > float(CONFIG.get("numerics", "direction_threshold")) * omega_sup
    eigenpair_residual, eigenpair_holds = None, None
    if omega_nonzero:
        xi = omega_here / omega_norm
        jac = profile.U.jacobian(y_star[None])[0]
        strain = 0.5 * (jac + jac.T)
        eigenpair_residual = float(np.linalg.norm(strain @ xi - xi))
        allowance = CONFIG.tolerance("eigenpair") + 10.0 * local_vorticity_residual(profile, y_star)
        eigenpair_holds = eigenpair_residual <= allowance

    slack = 1e-12 * max(1.0, gamma)
    window = (
        point.eigenvalues[0] >= c_star - gamma - slack
        and point.eigenvalues[-1] <= 2.0 * (gamma - c_star) + slack
    )
    return dataclasses.replace(
        point,
        c_star=c_star,
        c_star_raw=c_raw,
        eps_star=eps_star,
        outgoing=outgoing,
        omega_nonzero=omega_nonzero,
        eigenpair_residual=eigenpair_residual,
        eigenpair_holds=eigenpair_holds,
        implied_gamma_bound=0.5 + c_star if outgoing else None,
        eigenvalue_window_holds=bool(window) if outgoing else None,
        num_samples=int(offsets.shape[0] * offsets.shape[1]),
    )


def default_eps_star(points: Sequence[NodalPoint], fallback: float = 0.1) -> float:
    """A third of the smallest distance between nodal points (or the fallback)."""
    locations = np.array([pt.location for pt in points])
    if len(locations) < 2:
        return fallback
    dist = np.linalg.norm(locations[:, None] - locations[None, :], axis=-1)
    return min(fallback, float(dist[np.triu_indices(len(locations), 1)].min()) / 3.0)


def gamma_bound_entry(
    name: str, gamma: float, bound: float, applies: bool, reference: Optional[str] = None, **details
) -> ReportEntry:
    """gamma >= 1/2 + c_* judged on the shortfall bound - gamma where Omega(y_*) != 0,
    reported as information otherwise."""
    reference = reference or (
        "the local outgoing property at a nodal point with Omega != 0 implies gamma >= 1/2 + c_*"
    )
    if not applies:
        return ReportEntry.info(
            name,
            reference,
            bound,
            message=f"profile gamma = {gamma:g}; Omega vanishes at the nodal point, the bound is not implied",
            **details,
        )
    details.setdefault("implied_gamma_bound", bound)
    entry = ReportEntry.check(name, reference, bound - gamma, CONFIG.tolerance("gamma_bound"), **details)
    if entry.failed:
        entry.message = f"profile gamma = {gamma:g} contradicts gamma >= {bound:.6g}"
    return entry


def nodal_entries(profile: Profile, points: Sequence[NodalPoint]) -> List[ReportEntry]:
    entries = [
        ReportEntry.info(
            "nodal.count",
            "nodal set N_V = {y : gamma y + U(y) = 0}",
            float(len(points)),
            locations=[pt.location for pt in points],
        ),
        ReportEntry.check(
            "nodal.strain_trace",
            "the strain at a nodal point is traceless",
            max((abs(pt.strain_trace) for pt in points), default=0.0),
            CONFIG.tolerance("divergence"),
        ),
    ]
    for index, pt in enumerate(points):
        if pt.c_star is None:
            continue
        tag = f"nodal[{index}]"
        entries.append(
            ReportEntry.outcome(
                f"{tag}.outgoing",
                "local outgoing property V(y).(y - y_*) >= c_* |y - y_*|^2 (empirical certificate)",
                bool(pt.outgoing),
                message=f"c_* = {pt.c_star_raw:.6g} from {pt.num_samples} samples within {pt.eps_star:g}",
                residual=pt.c_star_raw,
                location=pt.location,
            )
        )
        if pt.outgoing:
            entries.append(
                gamma_bound_entry(f"{tag}.gamma_bound", profile.gamma, pt.implied_gamma_bound, pt.omega_nonzero)
            )
            entries.append(
                ReportEntry.outcome(
                    f"{tag}.eigenvalue_window",
                    "strain eigenvalues lie in [c_* - gamma, 2 (gamma - c_*)]",
                    bool(pt.eigenvalue_window_holds),
                    eigenvalues=pt.eigenvalues,
                )
            )
        if pt.eigenpair_holds is not None:
            entries.append(
                ReportEntry.outcome(
                    f"{tag}.eigenpair",
                    "(1, Xi(y_*)) is an eigenpair of the strain at a nodal point with Omega != 0",
                    pt.eigenpair_holds,
                    residual=pt.eigenpair_residual,
                )
            )
    return entries


def vanishing_order(profile: Profile, y_star: np.ndarray, scale: float = 1.0) -> VanishingOrder:
    """Log-log slope of the shell maxima of |Omega| around y_* on radii in [1e-3, 1e-1] * scale.

    Shells on which |Omega| underflows to zero, or slopes above the configured cap, are
    reported as consistent with infinite-order vanishing.

    Raises
    ------
    NotVanishingError
        If |Omega(y_*)| is above the vanishing threshold.
    """
    y_star = np.asarray(y_star, dtype=float)
    omega = vorticity_of(profile)
    value = float(np.linalg.norm(omega.evaluate(y_star[None])[0]))
    threshold = float(CONFIG.get("vanishing", "threshold"))
    if value > threshold:
        raise NotVanishingError(
            f"|Omega| = {value:.3e} at {y_star.tolist()} exceeds {threshold:g}: vanishing order 0."
        )
    cap = float(CONFIG.get("vanishing", "order_cap"))
    radii = scale * np.geomspace(
        float(CONFIG.get("vanishing", "radii_min")),
        float(CONFIG.get("vanishing", "radii_max")),
        int(CONFIG.get("vanishing", "num_radii")),
    )
    dirs = fibonacci_sphere(int(CONFIG.get("flow", "sphere_points")))
    shell_max = np.array(
        [np.max(np.linalg.norm(omega.evaluate(y_star + r * dirs), axis=-1)) for r in radii]
    )
    if np.any(shell_max <= 0.0):
        return VanishingOrder(
            order=float("inf"), fit_residual=0.0, stderr=0.0, infinite=True, cap=cap,
            radii=radii, shell_max=shell_max,
        )
    fit = fit_power_law(radii, shell_max)
    return VanishingOrder(
        order=fit.slope,
        fit_residual=fit.rms,
        stderr=fit.slope_stderr,
        infinite=fit.slope > cap,
        cap=cap,
        radii=radii,
        shell_max=shell_max,
    )


def vanishing_entry(result: VanishingOrder, y_star: np.ndarray) -> ReportEntry:
    return ReportEntry.info(
        "nodal.vanishing_order",
        "a vorticity vanishing at a nodal point must vanish to infinite order",
        result.order,
        message=result.description,
        location=y_star,
        stderr=result.stderr,
    )
