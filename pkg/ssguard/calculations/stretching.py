"""The self-similar vortex-stretching factor A(y), its singular-integral form and the
lower bound on the size of a vorticity profile."""

from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import numpy as np
import sympy as sp

from ..classes import NormRequest, Profile, ReportEntry, SmallnessReport, StretchingResult
from ..constants import CONFIG
from ..errors import DirectionUndefinedError, DivergentTailError
from ..logger import LOGGER
from ..util import parallel_map
from .fitting import fit_power_law
from .normalization import grad_omega_sup, vorticity_of
from .norms import field_norm
from .quadrature import composite_gauss, cutoff, geometric_edges, sphere_rule

_KERNEL = 3.0 / (4.0 * np.pi)


# ---- direct form ----


def _omega_sup(profile: Profile) -> float:
    return field_norm(vorticity_of(profile), NormRequest(kind="sup"), profile.grid).value


def vorticity_direction(profile: Profile, y: np.ndarray, omega_sup: Optional[float] = None) -> np.ndarray:
    """Xi(y) = Omega(y) / |Omega(y)|."""
    y = np.asarray(y, dtype=float)
    omega = vorticity_of(profile).evaluate(y[None])[0]
    norm = float(np.linalg.norm(omega))
    omega_sup = _omega_sup(profile) if omega_sup is None else omega_sup
    threshold = float(CONFIG.get("numerics", "direction_threshold")) * omega_sup
    if not norm > threshold:
        raise DirectionUndefinedError(
            f"|Omega| = {norm:.3e} at {y.tolist()} is below the direction threshold {threshold:.3e}."
        )
    return omega / norm


def stretching_direct(profile: Profile, y: np.ndarray, omega_sup: Optional[float] = None) -> float:
    """A(y) = Xi . (grad U) Xi, the stretching rate of |Omega| at y.

    Raises
    ------
    DirectionUndefinedError
        If |Omega(y)| is below the configured fraction of |Omega|_inf.
    """
    y = np.asarray(y, dtype=float)
    xi = vorticity_direction(profile, y, omega_sup)
    jac = profile.U.jacobian(y[None])[0]
    strain = 0.5 * (jac + jac.T)
    full = float(xi @ jac @ xi)
    symmetric = float(xi @ strain @ xi)
    assert abs(full - symmetric) <= 1e-12 * max(1.0, float(np.abs(jac).max())), (
        "antisymmetric part must not contract"
    )
    return symmetric


def stretching_field(profile: Profile, points: np.ndarray) -> np.ndarray:
    """A at many points at once; nan where the direction is undefined."""
    points = np.asarray(points, dtype=float)
    omega = vorticity_of(profile).evaluate(points)
    norm = np.linalg.norm(omega, axis=-1)
    threshold = float(CONFIG.get("numerics", "direction_threshold")) * _omega_sup(profile)
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = omega / norm[..., None]
    jac = profile.U.jacobian(points)
    values = np.einsum("...i,...ij,...j->...", xi, jac, xi)
    return np.where(norm > threshold, values, np.nan)


# ---- singular-integral form ----


def _kernel_directions(xi: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """D(z_hat) = (z_hat . Xi) (Xi x z_hat), so that the integrand numerator is Omega . D."""
    return (dirs @ xi)[:, None] * np.cross(xi, dirs)


def _inner_piece(omega_field, y, xi, L, radial_order, polar_order, azimuthal_points) -> float:
    panels = int(CONFIG.get("stretching", "radial_panels"))
    r, wr = composite_gauss(geometric_edges(0.0, 2.0 * L, panels), radial_order)
    dirs, wd = sphere_rule(polar_order, azimuthal_points)
    kern = _kernel_directions(xi, dirs)
    omega_y = omega_field.evaluate(y[None])[0]
    points = y + r[:, None, None] * dirs[None, :, :]
    delta = omega_field.evaluate(points) - omega_y
    numer = np.einsum("kmc,mc->km", delta, kern)
    radial = wr * cutoff(r / L) / r
    return _KERNEL * float(radial @ numer @ wd)


def _outer_edges(L: float, r_out: float) -> np.ndarray:
    if r_out <= 2.0 * L:
        return np.array([L, 1.5 * L, 2.0 * L])
    panels = max(4, 2 * int(np.ceil(np.log2(r_out / (2.0 * L)))))
    return np.concatenate([[L, 1.5 * L], geometric_edges(2.0 * L, r_out, panels)])


def _outer_piece(omega_field, y, xi, L, r_out, radial_order, polar_order, azimuthal_points) -> float:
    r, wr = composite_gauss(_outer_edges(L, r_out), radial_order)
    dirs, wd = sphere_rule(polar_order, azimuthal_points)
    kern = _kernel_directions(xi, dirs)
    total = 0.0
    # chunk the radial nodes to bound memory on large direction sets
    for chunk in np.array_split(np.arange(len(r)), max(1, len(r) // 32)):
        points = y + r[chunk, None, None] * dirs[None, :, :]
        numer = np.einsum("kmc,mc->km", omega_field.evaluate(points), kern)
        radial = wr[chunk] * (1.0 - cutoff(r[chunk] / L)) / r[chunk]
        total += float(radial @ numer @ wd)
    return _KERNEL * total


def outer_truncation(
    omega_field, y: np.ndarray, xi: np.ndarray, L: float, tolerance: float
) -> Tuple[float, float, Optional[float]]:
    """Truncation radius of the outer quadrature and the bound of the neglected tail.

    Fits max |Omega(y + z) x Xi| ~ M |z|^-k on spheres around y; the tail beyond R is
    bounded by 3 M R^-k / k. Returns (R_out, tail bound, k).
    """
    cap = float(CONFIG.get("stretching", "max_radius_factor")) * L
    fraction = float(CONFIG.get("stretching", "tail_fraction"))
    dirs, _ = sphere_rule(16, 32)
    radii = 2.0 * L * 2.0 ** np.arange(0, int(np.ceil(np.log2(cap / (2.0 * L)))) + 1)
    radii = np.minimum(radii, cap)
    maxima = np.array(
        [
            np.max(np.linalg.norm(np.cross(omega_field.evaluate(y + rad * dirs), xi), axis=-1))
            for rad in radii
        ]
    )
    floor = 1e-14 * max(float(maxima.max()), 1e-300)
    nonzero = np.nonzero(maxima > floor)[0]
    if len(nonzero) == 0:
        return 2.0 * L, 0.0, None
    last = int(nonzero[-1])
    if last < len(radii) - 1:
        # the field vanishes beyond the last nonzero sphere
        return float(radii[last + 1]), 0.0, None
    keep = maxima[-3:] > floor
    fit = fit_power_law(radii[-3:][keep], maxima[-3:][keep]) if keep.sum() >= 2 else None
    k = -fit.slope if fit is not None else 0.0
    if k <= 0.0:
        raise DivergentTailError(
            f"|Omega x Xi| does not decay around y = {y.tolist()} (fitted exponent {k:.3g}); "
            "the outer stretching integral diverges.",
            exponent=k,
        )
    # log space: steep local fits carry amplitudes beyond the float range
    log_scale = np.log(3.0) + fit.intercept - np.log(k)
    with np.errstate(over="ignore", under="ignore"):
        r_out = float(np.exp((log_scale - np.log(fraction * tolerance)) / k))
        r_out = float(np.clip(r_out, 2.0 * L, cap))
        tail = float(np.exp(log_scale - k * np.log(r_out)))
    return r_out, tail, k


def outer_bound(lp_norm: float, L: float, p: float) -> float:
    """(3/4pi)^(1/p) (p-1)^((p-1)/p) |Omega|_p L^(-3/p), the Hoelder bound of the outer piece."""
    return _KERNEL ** (1.0 / p) * (p - 1.0) ** ((p - 1.0) / p) * lp_norm * L ** (-3.0 / p)


def _majorants(profile: Profile, L: float, p: float) -> Tuple[float, float]:
    c_in = float(CONFIG.get("stretching", "c_in"))
    bound_in = c_in * L * grad_omega_sup(profile)
    try:
        lp = field_norm(vorticity_of(profile), NormRequest.lp(p), profile.grid)
        bound_out = outer_bound(lp.value + lp.error, L, p)
    except DivergentTailError as err:
        LOGGER.warning(f"Outer majorant unavailable: {err}")
        bound_out = float("inf")
    return bound_in, bound_out


def stretching_integral(
    profile: Profile,
    y: np.ndarray,
    L: float,
    p: float = 2.0,
    radial_order: Optional[int] = None,
    majorants: Optional[Tuple[float, float]] = None,
) -> StretchingResult:
    """A(y) from the principal-value integral, split at the cutoff length L.

    The inner piece integrates the subtracted kernel (Omega(y+z) - Omega(y)) chi(|z|/L)
    over |z| <= 2L with spherical product Gauss rules graded toward z = 0; the outer piece
    integrates Omega(y+z) (1 - chi(|z|/L)) out to a radius where the fitted far field
    bounds the remaining tail. The error estimate is the difference to a rule of half the
    order, plus the tail bound.

    Raises
    ------
    DirectionUndefinedError
        If |Omega(y)| is below threshold.
    DivergentTailError
        If |Omega| decays too slowly for the outer integral.
    ValueError
        If 2L exceeds the half width of the evaluation grid.
    """
    if not L > 0:
        raise ValueError(f"The cutoff length must be positive (got {L}).")
    if not p > 1:
        raise ValueError(f"The outer bound needs p > 1 (got {p}).")
    if 2.0 * L > profile.grid.half_width():
        raise ValueError(
            f"Cutoff 2L = {2.0 * L:g} exceeds the grid half width {profile.grid.half_width():g}."
        )
    y = np.asarray(y, dtype=float)
    omega_field = vorticity_of(profile)
    omega_sup = _omega_sup(profile)
    xi = vorticity_direction(profile, y, omega_sup)
    tolerance = float(CONFIG.get("stretching", "tolerance"))
    order = radial_order or int(CONFIG.get("stretching", "radial_order"))
    polar = int(CONFIG.get("stretching", "polar_order"))
    azimuthal = int(CONFIG.get("stretching", "azimuthal_points"))

    alpha_in = _inner_piece(omega_field, y, xi, L, order, polar, azimuthal)
    coarse_in = _inner_piece(omega_field, y, xi, L, max(order // 2, 2), polar // 2, azimuthal // 2)
    r_out, tail, _ = outer_truncation(omega_field, y, xi, L, tolerance)
    alpha_out = _outer_piece(omega_field, y, xi, L, r_out, order, polar, azimuthal)
    coarse_out = _outer_piece(
        omega_field, y, xi, L, r_out, max(order // 2, 2), polar // 2, azimuthal // 2
    )
    error_in = abs(alpha_in - coarse_in)
    error_out = abs(alpha_out - coarse_out) + tail

    try:
        a_direct = stretching_direct(profile, y, omega_sup)
    except DirectionUndefinedError:
        a_direct = float("nan")
    bound_in, bound_out = majorants if majorants is not None else _majorants(profile, L, p)
    return StretchingResult(
        point=y,
        A_direct=a_direct,
        A_integral=alpha_in + alpha_out,
        alpha_in=alpha_in,
        alpha_out=alpha_out,
        bound_in=bound_in,
        bound_out=bound_out,
        quad_error=error_in + error_out,
        L=L,
        p=p,
        error_in=error_in,
        error_out=error_out,
    )


def stretching_batch(
    profile: Profile, points: Iterable[np.ndarray], L: float, p: float = 2.0
) -> List[StretchingResult]:
    """stretching_integral at many points on the thread pool (majorants computed once)."""
    points = [np.asarray(pt, dtype=float) for pt in points]
    majorants = _majorants(profile, L, p)
    return parallel_map(
        lambda pt: stretching_integral(profile, pt, L, p, majorants=majorants),
        points,
        desc="Stretching integral",
    )


def sample_points(profile: Profile, count: int, seed: int = 0, L: float = 0.0) -> np.ndarray:
    """Random grid nodes with |Omega| above 1e-3 of its max, at least 2L inside the box."""
    grid = profile.grid
    points = grid.points().reshape(-1, 3)
    mag = np.linalg.norm(vorticity_of(profile).values_on(grid), axis=-1).reshape(-1)
    margin = 2.0 * L
    inside = np.all((points >= grid.lower + margin) & (points <= grid.upper - margin), axis=-1)
    candidates = np.nonzero(inside & (mag > 1e-3 * mag.max(initial=0.0)))[0]
    if len(candidates) == 0:
        raise ValueError("No grid nodes with a well-defined vorticity direction.")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(candidates, size=min(count, len(candidates)), replace=False)
    return points[np.sort(chosen)]


def stretching_entries(results: List[StretchingResult]) -> List[ReportEntry]:
    """Report entries for the majorants and the direct/integral agreement."""
    reference_in = "inner stretching majorant |alpha_in| <= C_in L |grad Omega|_inf"
    reference_out = "outer stretching majorant |alpha_out| <= (3/4pi)^(1/p) (p-1)^((p-1)/p) |Omega|_p L^(-3/p)"
    reference_agree = "stretching factor: strain contraction equals the singular integral"
    in_violations = [r for r in results if not r.inner_bound_holds]
    out_violations = [r for r in results if not r.outer_bound_holds]
    entries = [
        ReportEntry.outcome(
            "stretching.bound_in",
            reference_in,
            not in_violations,
            message=f"{len(in_violations)} of {len(results)} points violate the inner majorant",
            residual=max((abs(r.alpha_in) - r.bound_in for r in results), default=0.0),
        ),
        ReportEntry.outcome(
            "stretching.bound_out",
            reference_out,
            not out_violations,
            message=f"{len(out_violations)} of {len(results)} points violate the outer majorant",
            residual=max((abs(r.alpha_out) - r.bound_out for r in results), default=0.0),
        ),
    ]
    finite = [r for r in results if np.isfinite(r.A_direct)]
    if finite:
        deviation = max(abs(r.A_integral - r.A_direct) / max(1.0, abs(r.A_direct)) for r in finite)
        entries.append(
            ReportEntry.check(
                "stretching.agreement",
                reference_agree,
                deviation,
                CONFIG.tolerance("stretching_agreement"),
                points=len(finite),
                max_quad_error=max(r.quad_error for r in finite),
            )
        )
    return entries


# ---- constants and the smallness bound ----


@lru_cache(maxsize=64)
def _cp_exact(p: float) -> float:
    q = sp.nsimplify(p, rational=True)
    expr = (
        2
        * sp.Integer(6) ** (3 / (q + 3))
        * (sp.Integer(3) / (4 * sp.pi)) ** (1 / (q + 3))
        * (q - 1) ** ((q - 1) / (q + 3))
    )
    return float(expr.evalf(50))


def cp_constant(p: float) -> float:
    """C_p = 2 6^(3/(p+3)) (3/(4pi))^(1/(p+3)) (p-1)^((p-1)/(p+3)), evaluated with 50 digits."""
    if not p > 1:
        raise ValueError(f"C_p is defined for p > 1 only (got {p}).")
    return _cp_exact(float(p))


@lru_cache(maxsize=64)
def _normalized_threshold_exact(p: float) -> float:
    q = sp.nsimplify(p, rational=True)
    expr = sp.Rational(1, 2) * (sp.pi / 1296) ** (1 / q) * (q - 1) ** (-1 + 1 / q)
    return float(expr.evalf(50))


def normalized_threshold(p: float) -> float:
    """Lower bound (1/2) (pi/1296)^(1/p) (p-1)^(-1+1/p) on |Omega|_p when |grad Omega|_inf = 1."""
    if not p > 1:
        raise ValueError(f"The normalized threshold is defined for p > 1 only (got {p}).")
    return _normalized_threshold_exact(float(p))


def smallness_check(profile: Profile, p: float = 2.0) -> SmallnessReport:
    """Compares the scaling-invariant size |grad Omega|_inf^(3/(p+3)) |Omega|_p^(p/(p+3)) with 1/C_p."""
    if not p > 3.0 * profile.gamma:
        raise ValueError(
            f"The smallness bound needs p > 3 gamma = {3.0 * profile.gamma:g} (got p = {p})."
        )
    grad_sup = grad_omega_sup(profile)
    if grad_sup == 0.0:
        raise ValueError("The vorticity profile vanishes identically; the bound concerns nontrivial profiles.")
    lp_norm = field_norm(vorticity_of(profile), NormRequest.lp(p), profile.grid).value
    size = grad_sup ** (3.0 / (p + 3.0)) * lp_norm ** (p / (p + 3.0))
    threshold = 1.0 / cp_constant(p)
    verdict = "SATISFIED" if size >= threshold else "VIOLATED"
    normalized = normalized_threshold(p)
    normalized_verdict = None
    if abs(grad_sup - 1.0) <= CONFIG.tolerance("normalization"):
        normalized_verdict = "SATISFIED" if lp_norm >= normalized else "VIOLATED"
    LOGGER.debug(f"Smallness (p={p:g}): size {size:.6g} vs threshold {threshold:.6g} -> {verdict}")
    return SmallnessReport(
        p=p,
        size=size,
        threshold=threshold,
        normalized_threshold=normalized,
        verdict=verdict,
        grad_sup=grad_sup,
        lp_norm=lp_norm,
        normalized_verdict=normalized_verdict,
    )


def smallness_entry(report: SmallnessReport) -> ReportEntry:
    return ReportEntry.outcome(
        f"stretching.smallness.{report.p:g}",
        "the vorticity profile cannot be too small: size >= 1/C_p",
        report.satisfied,
        message=f"size {report.size:.6g}, threshold {report.threshold:.6g}",
        residual=report.size,
        tolerance=report.threshold,
        normalized_verdict=report.normalized_verdict,
        normalized_threshold=report.normalized_threshold,
    )


# ---- the value of A at the maximum of |Omega| ----


def _refine_maximum(mag: np.ndarray, index: Tuple[int, ...], grid) -> np.ndarray:
    """Per-axis parabolic refinement of a grid maximum."""
    location = np.array([ax[i] for ax, i in zip(grid.axes(), index)])
    for axis in range(3):
        i = index[axis]
        n = grid.dims[axis]
        if not grid.periodic and (i == 0 or i == n - 1):
            continue
        lo = list(index)
        hi = list(index)
        lo[axis] = (i - 1) % n
        hi[axis] = (i + 1) % n
        f_lo, f_0, f_hi = mag[tuple(lo)], mag[index], mag[tuple(hi)]
        curvature = f_lo - 2.0 * f_0 + f_hi
        if curvature < 0.0:
            shift = np.clip(0.5 * (f_lo - f_hi) / curvature, -0.5, 0.5)
            location[axis] += shift * grid.spacing[axis]
    return location


def locate_vorticity_maximum(profile: Profile) -> Tuple[np.ndarray, float, bool]:
    """Grid scan for the maximum of |Omega| with parabolic refinement.

    Ties are broken toward the grid center. Returns the location, the maximum and
    whether the maximum sits strictly on the grid boundary.
    """
    grid = profile.grid
    mag = np.linalg.norm(vorticity_of(profile).values_on(grid), axis=-1)
    peak = float(mag.max())
    if not peak > 0:
        raise ValueError("The vorticity profile vanishes identically.")
    boundary = grid.boundary_mask()
    on_boundary = bool(boundary.any() and mag[boundary].max() > mag[~boundary].max(initial=0.0))
    candidates = np.argwhere(mag >= peak * (1.0 - 1e-12))
    dist = np.linalg.norm(grid.points()[tuple(candidates.T)] - grid.center, axis=-1)
    index = tuple(int(i) for i in candidates[int(np.argmin(dist))])
    return _refine_maximum(mag, index, grid), peak, on_boundary


def argmax_stretching_check(profile: Profile) -> ReportEntry:
    """|A(y_*) - 1| at the global maximum y_* of |Omega|, which vanishes for exact profiles."""
    name = "stretching.argmax"
    reference = "at a global maximum of |Omega| the stretching factor equals 1"
    location, peak, on_boundary = locate_vorticity_maximum(profile)
    if on_boundary:
        return ReportEntry.inconclusive(
            name,
            reference,
            "the maximum of |Omega| lies on the grid boundary (domain too small)",
            location=location,
        )
    value = stretching_direct(profile, location)
    return ReportEntry.check(
        name,
        reference,
        abs(value - 1.0),
        CONFIG.tolerance("argmax_stretching"),
        message=f"A(y_*) = {value:.6g}",
        location=location,
        A=value,
        omega_max=peak,
    )
