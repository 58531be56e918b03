from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from ..classes import (
    FieldSource,
    NormEstimate,
    NormRequest,
    RegularGrid,
    jacobian_magnitude,
    magnitude,
)
from ..constants import CONFIG
from ..errors import DivergentTailError
from ..logger import LOGGER
from .envelope import fit_tail, shell_maxima


def _resolve_grid(field: FieldSource, grid: Optional[RegularGrid]) -> RegularGrid:
    grid = grid or field.grid
    if grid is None:
        raise ValueError(f"Field '{field.name}' is analytic; pass a grid to sample it on.")
    return grid


def quadrature_weights(grid: RegularGrid, rule: str = "trapezoid") -> np.ndarray:
    """Product weights of the trapezoid or midpoint (cell-sum) rule on the grid nodes.

    Meridional grids include the 2 pi r factor of the volume element.
    """
    weights_1d = []
    for n, h in zip(grid.dims, grid.spacing):
        w = np.full(n, h)
        if rule == "trapezoid" and not grid.periodic:
            w[[0, -1]] *= 0.5
        weights_1d.append(w)
    weights = weights_1d[0]
    for w in weights_1d[1:]:
        weights = np.multiply.outer(weights, w)
    if grid.ndim == 2:
        weights = weights * 2.0 * np.pi * grid.points()[..., 0]
    return weights


def _power_law_tail(log_amplitude: float, exponent: float, p: float, radius: float) -> float:
    """Integral of (A |y|^-k)^p over |y| > R, evaluated in log space.

    Fast (Gaussian-like) decay fits a huge amplitude with a huge exponent; the
    logarithm of their combination stays finite and an underflow means no tail.
    """
    kp = exponent * p
    log_tail = (
        np.log(4.0 * np.pi) + p * log_amplitude + (3.0 - kp) * np.log(radius) - np.log(kp - 3.0)
    )
    with np.errstate(over="ignore", under="ignore"):
        return float(np.exp(log_tail))


def _lp_norm(field: FieldSource, grid: RegularGrid, request: NormRequest) -> NormEstimate:
    p = request.p
    mag = magnitude(field.values_on(grid), field.rank)
    integral = float(np.sum(quadrature_weights(grid, request.rule) * mag**p))
    tail, exponent = 0.0, None
    if not grid.periodic and grid.ndim == 3:
        radii = np.linalg.norm(grid.points() - grid.center, axis=-1)
        shells = shell_maxima(mag, radii, int(CONFIG.get("numerics", "shell_count")))
        fit = fit_tail(shells.outer_radii, shells.maxima)
        if fit is not None:
            exponent = -fit.slope
            if exponent * p <= 3.0:
                raise DivergentTailError(
                    f"|{field.name}| decays like |y|^-{exponent:.3g} on the outer shells, "
                    f"which is not in L^{p:g} (needs an exponent above {3.0 / p:.3g}).",
                    exponent=exponent,
                )
            tail = _power_law_tail(fit.intercept, exponent, p, grid.inscribed_radius())
    value = integral ** (1.0 / p)
    error = (integral + tail) ** (1.0 / p) - value
    return NormEstimate(value=value, error=error, request=request, tail_exponent=exponent)


def _holder_seminorm(field: FieldSource, grid: RegularGrid, request: NormRequest) -> NormEstimate:
    points = grid.points().reshape(-1, grid.ndim)
    values = field.values_on(grid).reshape(len(points), -1)
    max_points = int(CONFIG.get("numerics", "holder_max_points"))
    if len(points) > max_points:
        stride = int(np.ceil(len(points) / max_points))
        LOGGER.debug(f"Hoelder seminorm: using every {stride}th of {len(points)} nodes")
        points, values = points[::stride], values[::stride]
    pairs = cKDTree(points).query_pairs(r=request.L0 * (1.0 + 1e-12), output_type="ndarray")
    if len(pairs) == 0:
        return NormEstimate(value=0.0, request=request, num_pairs=0)
    i, j = pairs[:, 0], pairs[:, 1]
    dist = np.linalg.norm(points[i] - points[j], axis=-1)
    diff = np.linalg.norm(values[i] - values[j], axis=-1)
    ratio = diff / dist**request.mu
    return NormEstimate(value=float(ratio.max()), request=request, num_pairs=len(pairs))


def field_norm(
    field: FieldSource, request: NormRequest, grid: Optional[RegularGrid] = None
) -> NormEstimate:
    """Norm or seminorm of a field sampled on a grid.

    Parameters
    ----------
    field : FieldSource
        The field; analytic fields are sampled on ``grid``.
    request : NormRequest
        Which norm: 'sup', 'grad-sup' (Frobenius norm of the jacobian), 'lp' (with a fitted
        power-law tail estimate beyond the box) or 'holder' (max over sampled pairs).
    grid : RegularGrid, optional
        Sampling grid, defaults to the field's own grid.

    Returns
    -------
    NormEstimate
        The value and its estimated truncation error.

    Raises
    ------
    DivergentTailError
        For Lp norms whose fitted far-field decay is not p-integrable.
    """
    grid = _resolve_grid(field, grid)
    if request.kind == "sup":
        value = float(np.max(magnitude(field.values_on(grid), field.rank)))
        return NormEstimate(value=value, request=request)
    if request.kind == "grad-sup":
        value = float(np.max(jacobian_magnitude(field.jacobian_on(grid), field.rank)))
        return NormEstimate(value=value, request=request)
    if request.kind == "lp":
        return _lp_norm(field, grid, request)
    return _holder_seminorm(field, grid, request)
