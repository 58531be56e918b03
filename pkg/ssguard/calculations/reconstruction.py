"""Velocity from vorticity (Biot-Savart) and the Omega = curl U consistency check."""

from typing import Optional

import numpy as np
from scipy import fft

from ..classes import FieldSource, Grid3, Profile, ReportEntry
from ..constants import CONFIG
from ..logger import LOGGER
from ..stencils import curl_from_jacobian, wavenumbers


def padded_grid(grid: Grid3, factor: int) -> Grid3:
    """Periodic grid with the same spacing and ``factor`` times as many nodes per axis, centered on ``grid``."""
    dims = tuple(factor * n for n in grid.dims)
    origin = tuple(
        c - 0.5 * (n - 1) * h for c, n, h in zip(grid.center, dims, grid.spacing)
    )
    return Grid3(dims=dims, spacing=grid.spacing, origin=origin, boundary_policy="periodic")


def embedded_slices(grid: Grid3, padded: Grid3):
    """Index slices of ``grid`` inside ``padded``."""
    starts = [int(round((o - po) / h)) for o, po, h in zip(grid.origin, padded.origin, grid.spacing)]
    return tuple(slice(s, s + n) for s, n in zip(starts, grid.dims))


def biot_savart(omega: FieldSource, grid: Optional[Grid3] = None, padding: Optional[int] = None) -> FieldSource:
    """Spectral Biot-Savart reconstruction U = curl (-Laplace)^-1 Omega.

    On periodic grids the transform runs directly; decaying grids are zero-padded
    (default padding factor from the configuration) and the result is cropped back.
    The mean (k = 0) mode of U is set to zero.
    """
    grid = grid or omega.grid
    if grid is None:
        raise ValueError("Biot-Savart reconstruction of an analytic field needs a grid.")
    if omega.rank != 3:
        raise ValueError("Biot-Savart reconstruction needs a vector vorticity.")
    if grid.periodic:
        work_grid, values = grid, omega.values_on(grid)
        crop = tuple(slice(None) for _ in range(3))
    else:
        factor = int(CONFIG.get("numerics", "pressure_padding") if padding is None else padding)
        work_grid = padded_grid(grid, factor)
        values = np.zeros(work_grid.dims + (3,))
        crop = embedded_slices(grid, work_grid)
        values[crop] = omega.values_on(grid)
    k = wavenumbers(work_grid.dims, work_grid.spacing)
    k2 = np.sum(k**2, axis=-1)
    k2[(0,) * 3] = 1.0
    omega_hat = fft.fftn(values, axes=(0, 1, 2))
    # U_hat = i k x Omega_hat / |k|^2
    u_hat = 1j * np.cross(k, omega_hat) / k2[..., None]
    u_hat[(0,) * 3] = 0.0
    u = np.real(fft.ifftn(u_hat, axes=(0, 1, 2)))[crop]
    LOGGER.debug(f"Biot-Savart reconstruction on {work_grid.dims} nodes")
    return FieldSource.sampled(u, grid, name=f"biot_savart({omega.name})", decay_exponent=2.0)


def profile_consistency(profile: Profile) -> ReportEntry:
    """Interior relative deviation of the supplied Omega from curl U."""
    reference = "vorticity is the curl of the velocity (omega = curl u)"
    tol = CONFIG.tolerance("consistency")
    if profile.Omega is None:
        return ReportEntry.info("fields.consistency", reference, message="no vorticity supplied")
    grid = profile.grid
    mask = grid.interior_mask(int(CONFIG.get("numerics", "interior_width")))
    curl_u = curl_from_jacobian(profile.U.jacobian_on(grid))
    omega = profile.Omega.values_on(grid)
    deviation = np.linalg.norm(curl_u - omega, axis=-1)[mask]
    scale = float(np.max(np.linalg.norm(omega, axis=-1)[mask], initial=0.0))
    residual = float(deviation.max(initial=0.0)) / scale if scale > 0 else float(deviation.max(initial=0.0))
    return ReportEntry.check("fields.consistency", reference, residual, tol, interior_nodes=int(mask.sum()))
