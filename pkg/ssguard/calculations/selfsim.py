"""Residuals of the stationary self-similar Euler equations, pressure recovery and the
self-similar Bernoulli function."""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import fft

from ..classes import (
    BernoulliData,
    DiagnosticReport,
    FieldSource,
    NormRequest,
    Profile,
    RegularGrid,
    ReportEntry,
    ResidualField,
)
from ..constants import CONFIG
from ..errors import NonDecayingFieldError
from ..logger import LOGGER
from ..stencils import gradient_array, wavenumbers
from .fitting import fit_even_quadratic
from .normalization import vorticity_of
from .norms import field_norm, quadrature_weights
from .reconstruction import embedded_slices, padded_grid

REFERENCES = {
    "velocity-form": "self-similar Euler equation in velocity form: "
    "(1-gamma) U + gamma (y.grad) U + (U.grad) U + grad P = 0",
    "vorticity-form": "self-similar Euler equation in vorticity form: "
    "Omega + gamma (y.grad) Omega + (U.grad) Omega = (Omega.grad) U",
    "lp-identity": "|Omega|^p + (1/p) (gamma y + U).grad |Omega|^p = A |Omega|^p",
    "divergence": "incompressibility div U = 0",
}


# ---- pressure ----


def solve_pressure_poisson(source: np.ndarray, grid: RegularGrid) -> np.ndarray:
    """Spectral solution of Laplace P = source on a periodic grid, zero-mean gauge."""
    k = wavenumbers(grid.dims, grid.spacing)
    k2 = np.sum(k**2, axis=-1)
    k2[(0,) * grid.ndim] = 1.0
    p_hat = -fft.fftn(source) / k2
    p_hat[(0,) * grid.ndim] = 0.0
    return np.real(fft.ifftn(p_hat))


def _check_decay(values: np.ndarray, grid: RegularGrid):
    mag = np.linalg.norm(values, axis=-1)
    peak = float(mag.max(initial=0.0))
    outer = float(mag[grid.boundary_mask()].max(initial=0.0))
    if peak > 0 and outer >= 0.5 * peak:
        raise NonDecayingFieldError(
            f"|U| on the box boundary ({outer:.3g}) is comparable to its maximum ({peak:.3g}); "
            "the pressure cannot be recovered from a non-decaying velocity."
        )


def recover_pressure(profile: Profile, forcing: Optional[FieldSource] = None) -> FieldSource:
    """Pressure of the velocity profile from Laplace P = -d_i d_j (U^i U^j) + div f.

    The forcing f defaults to zero and the harmonic part is taken to be zero. On decaying
    grids U and f are extended along their envelopes onto a box enlarged by the configured
    padding factor; the gauge makes the mean of P on the outer layer of that box vanish.
    The mean of P on the outermost shell of the evaluation grid is recorded in
    ``params['gauge_shell_mean']``.

    Raises
    ------
    NonDecayingFieldError
        If |U| on the box boundary is at least half its maximum.
    """
    grid = profile.grid
    values = profile.U.values_on(grid)
    if forcing is None and not np.any(values):
        return FieldSource.sampled(np.zeros(grid.dims), grid, name="pressure(recovered)")
    if grid.periodic:
        work_grid, work = grid, values
        crop = tuple(slice(None) for _ in range(3))
    else:
        _check_decay(values, grid)
        work_grid = padded_grid(grid, int(CONFIG.get("numerics", "pressure_padding")))
        crop = embedded_slices(grid, work_grid)
        work = profile.U.evaluate(work_grid.points())
        work[crop] = values
    k = wavenumbers(work_grid.dims, work_grid.spacing)
    k2 = np.sum(k**2, axis=-1)
    k2[(0,) * 3] = 1.0
    flux_hat = fft.fftn(work[..., :, None] * work[..., None, :], axes=(0, 1, 2))
    p_hat = -np.einsum("...i,...j,...ij->...", k, k, flux_hat) / k2
    if forcing is not None:
        f_hat = fft.fftn(forcing.values_on(work_grid), axes=(0, 1, 2))
        p_hat = p_hat - 1j * np.einsum("...i,...i->...", k, f_hat) / k2
    p_hat[(0,) * 3] = 0.0
    pressure = np.real(fft.ifftn(p_hat))
    if not grid.periodic:
        pressure -= pressure[work_grid.outer_layer_mask()].mean()
    pressure = pressure[crop]
    shell_mean = float(pressure[grid.boundary_mask()].mean()) if not grid.periodic else 0.0
    LOGGER.debug(f"Recovered pressure on {work_grid.dims}; outer-shell mean {shell_mean:.3e}")
    field = FieldSource.sampled(pressure, grid, name="pressure(recovered)", decay_exponent=2.0)
    field.params["gauge_shell_mean"] = shell_mean
    return field


def pressure_of(profile: Profile) -> Tuple[FieldSource, str]:
    """The supplied pressure, or the recovered one; with its provenance."""
    if profile.P is not None:
        return profile.P, "supplied"
    return recover_pressure(profile), "recovered"


# ---- residuals ----


def transport_velocity_on(profile: Profile, grid: RegularGrid) -> np.ndarray:
    return profile.gamma * grid.points() + profile.U.values_on(grid)


def velocity_residual(profile: Profile, pressure: FieldSource) -> np.ndarray:
    grid = profile.grid
    y = grid.points()
    u = profile.U.values_on(grid)
    jac = profile.U.jacobian_on(grid)
    grad_p = pressure.jacobian_on(grid)
    gamma = profile.gamma
    return (
        (1.0 - gamma) * u
        + np.einsum("...ji,...i->...j", jac, gamma * y + u)
        + grad_p
    )


def vorticity_residual(profile: Profile) -> np.ndarray:
    grid = profile.grid
    omega_field = vorticity_of(profile)
    omega = omega_field.values_on(grid)
    jac_omega = omega_field.jacobian_on(grid)
    jac_u = profile.U.jacobian_on(grid)
    v = transport_velocity_on(profile, grid)
    return (
        omega
        + np.einsum("...ji,...i->...j", jac_omega, v)
        - np.einsum("...ji,...i->...j", jac_u, omega)
    )


def _direction_mask(omega: np.ndarray) -> np.ndarray:
    mag = np.linalg.norm(omega, axis=-1)
    threshold = float(CONFIG.get("numerics", "direction_threshold")) * float(mag.max(initial=0.0))
    return mag > threshold


def lp_identity_residual(profile: Profile, p: float) -> Tuple[np.ndarray, np.ndarray]:
    """|Omega|^p + (1/p) V.grad |Omega|^p - A |Omega|^p, with grad |Omega|^p by stencils.

    Returns the residual (zero where the direction is undefined) and the mask of
    nodes where it is defined.
    """
    grid = profile.grid
    omega = vorticity_of(profile).values_on(grid)
    mag = np.linalg.norm(omega, axis=-1)
    defined = _direction_mask(omega)
    power = mag**p
    grad_power = gradient_array(power, grid.spacing, 1, "fd4", periodic=grid.periodic)
    v = transport_velocity_on(profile, grid)
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = np.where(defined[..., None], omega / np.where(defined, mag, 1.0)[..., None], 0.0)
    stretch = np.einsum("...i,...ij,...j->...", xi, profile.U.jacobian_on(grid), xi)
    residual = power + np.sum(v * grad_power, axis=-1) / p - stretch * power
    return np.where(defined, residual, 0.0), defined


def interior_norms(values: np.ndarray, grid: RegularGrid, mask: np.ndarray) -> Tuple[float, float]:
    mag = np.abs(values) if values.ndim == grid.ndim else np.linalg.norm(values, axis=-1)
    weights = quadrature_weights(grid)
    sup = float(mag[mask].max(initial=0.0))
    l2 = float(np.sqrt(np.sum(weights[mask] * mag[mask] ** 2)))
    return sup, l2


def selfsim_residual(profile: Profile, which: str, p: float = 2.0) -> ResidualField:
    """Residual field of one form of the self-similar equations with its interior norms.

    ``which`` is one of 'velocity-form', 'vorticity-form', 'lp-identity' or 'divergence'.
    The velocity form uses the supplied pressure, or the recovered one when none is given.
    """
    grid = profile.grid
    mask = grid.interior_mask(int(CONFIG.get("numerics", "interior_width")))
    pressure_source, masked = None, 0
    if which == "velocity-form":
        pressure, pressure_source = pressure_of(profile)
        values = velocity_residual(profile, pressure)
    elif which == "vorticity-form":
        if profile.Omega is None:
            raise ValueError("The vorticity-form residual needs a vorticity profile.")
        values = vorticity_residual(profile)
    elif which == "lp-identity":
        if not p >= 1:
            raise ValueError(f"The Lp identity needs p >= 1 (got {p}).")
        values, defined = lp_identity_residual(profile, p)
        masked = int(np.sum(mask & ~defined))
    elif which == "divergence":
        values = np.trace(profile.U.jacobian_on(grid), axis1=-2, axis2=-1)
    else:
        raise ValueError(f"Unknown residual form '{which}'.")
    sup, l2 = interior_norms(values, grid, mask)
    label = f"lp-identity({p:g})" if which == "lp-identity" else which
    return ResidualField(
        which=label,
        field=FieldSource.sampled(values, grid, name=f"residual {label}"),
        sup=sup,
        l2=l2,
        p=p if which == "lp-identity" else None,
        pressure_source=pressure_source,
        masked=masked,
    )


def residual_plan(profile: Profile, p_values: Sequence[float] = (2.0,)) -> List[Tuple[str, str, float]]:
    """(report name, form, p) of every applicable residual; divergence is always included."""
    plan = [("res.velocity", "velocity-form", 2.0)]
    if profile.Omega is not None:
        plan.append(("res.vorticity", "vorticity-form", 2.0))
        plan.extend((f"res.lp.{p:g}", "lp-identity", float(p)) for p in p_values)
    plan.append(("res.div", "divergence", 2.0))
    return plan


def selfsim_residuals(profile: Profile, p_values: Sequence[float] = (2.0,)) -> List[ResidualField]:
    """All applicable residuals; raises if any of them cannot be evaluated."""
    return [selfsim_residual(profile, which, p) for _, which, p in residual_plan(profile, p_values)]


def record_residuals(
    report: DiagnosticReport, profile: Profile, p_values: Sequence[float] = (2.0,)
) -> List[ResidualField]:
    """Evaluates and records every residual on its own.

    A form that cannot be evaluated (the velocity form without a recoverable pressure)
    becomes an INCONCLUSIVE entry and the remaining forms are still reported.
    """
    computed: List[ResidualField] = []
    for name, which, p in residual_plan(profile, p_values):

        def build(which=which, p=p):
            residual = selfsim_residual(profile, which, p)
            computed.append(residual)
            return residual_entry(residual)

        report.record(name, build, REFERENCES[which])
    return computed


def residual_entry(residual: ResidualField) -> ReportEntry:
    base = residual.which.split("(")[0]
    tol = CONFIG.tolerance("divergence" if base == "divergence" else "residual")
    entry = ReportEntry.check(
        residual.report_name,
        REFERENCES.get(base, base),
        residual.sup,
        tol,
        l2=residual.l2,
        pressure_source=residual.pressure_source,
        masked=residual.masked,
    )
    if entry.failed and base != "divergence":
        entry.message = f"not a self-similar solution: interior sup {residual.sup:.3e}"
    return entry


# ---- Bernoulli function ----


def bernoulli_field(profile: Profile, pressure: FieldSource) -> FieldSource:
    """H(y) = |V|^2 / 2 + P + gamma (gamma - 1) |y|^2 / 2 with its closed-form gradient."""
    gamma = profile.gamma
    velocity = profile.U

    def func(points):
        points = np.asarray(points, dtype=float)
        v = gamma * points + velocity.evaluate(points)
        return (
            0.5 * np.sum(v**2, axis=-1)
            + pressure.evaluate(points)
            + 0.5 * gamma * (gamma - 1.0) * np.sum(points**2, axis=-1)
        )

    def jac(points):
        points = np.asarray(points, dtype=float)
        v = gamma * points + velocity.evaluate(points)
        grad_v = velocity.jacobian(points) + gamma * np.eye(3)
        return (
            np.einsum("...ji,...j->...i", grad_v, v)
            + pressure.jacobian(points)
            + gamma * (gamma - 1.0) * points
        )

    return FieldSource(rank=1, name="bernoulli", params={"gamma": gamma}, func=func, jac=jac)


def _farfield_fit(H: np.ndarray, radii: np.ndarray, edges: np.ndarray) -> float:
    select = (radii >= edges[0]) & (radii <= edges[1])
    return fit_even_quadratic(radii[select], H[select])[1]


def bernoulli(profile: Profile) -> BernoulliData:
    """The Bernoulli function, its transport residual and its far-field quadratic coefficient.

    The coefficient c2 of H ~ c0 + c2 |y|^2 is fitted on the outer shells inside the
    inscribed ball of the grid and compared with gamma (2 gamma - 1) / 2; fits on
    successively outer shell windows are reported as the trend.
    """
    pressure, source = pressure_of(profile)
    gamma = profile.gamma
    grid = profile.grid
    points = grid.points()
    H = bernoulli_field(profile, pressure)
    v = transport_velocity_on(profile, grid)
    jac_u = profile.U.jacobian_on(grid)
    grad_h = (
        np.einsum("...ji,...j->...i", jac_u + gamma * np.eye(3), v)
        + pressure.jacobian_on(grid)
        + gamma * (gamma - 1.0) * points
    )
    transport = np.sum(v * grad_h, axis=-1) - (2.0 * gamma - 1.0) * np.sum(v**2, axis=-1)
    mask = grid.interior_mask(int(CONFIG.get("numerics", "interior_width")))
    transport_sup = float(np.abs(transport[mask]).max(initial=0.0))

    h_values = (
        0.5 * np.sum(v**2, axis=-1)
        + pressure.values_on(grid)
        + 0.5 * gamma * (gamma - 1.0) * np.sum(points**2, axis=-1)
    )
    radii = np.linalg.norm(points, axis=-1)
    r_max = grid.inscribed_radius()
    shells = int(CONFIG.get("numerics", "shell_count"))
    edges = np.linspace(0.0, r_max, shells + 1)
    coefficient = _farfield_fit(h_values, radii, (edges[-4], edges[-1]))
    trend = [_farfield_fit(h_values, radii, (edges[i], edges[i + 2])) for i in range(shells - 4, shells - 1)]
    target = 0.5 * gamma * (2.0 * gamma - 1.0)
    scale = max(abs(target), 0.5 * gamma**2)
    return BernoulliData(
        H=H,
        transport_residual=FieldSource.sampled(transport, grid, name="bernoulli transport"),
        transport_sup=transport_sup,
        farfield_coefficient=coefficient,
        farfield_target=target,
        farfield_deviation=abs(coefficient - target) / scale,
        coefficient_trend=trend,
        pressure_source=source,
    )


def bernoulli_entries(data: BernoulliData) -> List[ReportEntry]:
    return [
        ReportEntry.check(
            "bernoulli.transport",
            "V.grad H = (2 gamma - 1) |V|^2",
            data.transport_sup,
            CONFIG.tolerance("bernoulli_transport"),
            pressure_source=data.pressure_source,
        ),
        ReportEntry.check(
            "bernoulli.farfield",
            "H = gamma (2 gamma - 1) |y|^2 / 2 + o(|y|^2) in the far field",
            data.farfield_deviation,
            CONFIG.tolerance("bernoulli_farfield"),
            coefficient=data.farfield_coefficient,
            target=data.farfield_target,
            trend=data.coefficient_trend,
        ),
    ]


def r_flat(c_flat: float, gamma: float) -> float:
    """R_flat = max(1, (2 C_flat / gamma)^gamma), beyond which all trajectories escape."""
    if c_flat < 0:
        raise ValueError(f"The decay constant must be nonnegative (got {c_flat}).")
    if not gamma > 0:
        raise ValueError(f"The similarity exponent must be positive (got {gamma}).")
    return max(1.0, (2.0 * c_flat / gamma) ** gamma)


def pressure_gauge_entry(profile: Profile) -> Optional[ReportEntry]:
    """The outer-shell mean of a recovered pressure, as a gauge diagnostic."""
    if profile.P is not None:
        return None
    pressure = recover_pressure(profile)
    return ReportEntry.info(
        "pressure.gauge",
        "pressure with vanishing harmonic part, P = R_i R_j (U^i U^j)",
        pressure.params.get("gauge_shell_mean", 0.0),
        sup=field_norm(pressure, NormRequest(kind="sup"), profile.grid).value,
    )
