from typing import Optional

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.axes import Axes
from matplotlib.colors import LogNorm

from ..classes import ResidualField


def _mid_slice(values: np.ndarray, grid, axis: int):
    """The grid plane through the node closest to the box center, normal to ``axis``."""
    index = int(round((grid.center[axis] - grid.origin[axis]) / grid.spacing[axis]))
    index = min(max(index, 0), grid.dims[axis] - 1)
    plane = np.take(values, index, axis=axis)
    others = [k for k in range(grid.ndim) if k != axis]
    return plane, others


def plot_residual_slice(residual: ResidualField, ax: Optional[Axes] = None, axis: int = 1) -> Axes:
    """Magnitude of a residual on a mid-plane (cartesian) or the meridional plane, log colour scale."""
    ax = ax if ax is not None else plt.gca()
    field = residual.field
    grid = field.grid
    values = field.values
    if values.ndim == grid.ndim + 1:
        values = np.linalg.norm(values, axis=-1)
    values = np.abs(values)
    if grid.ndim == 3:
        plane, (i, j) = _mid_slice(values, grid, axis)
    else:
        plane, (i, j) = values, (0, 1)
    extent = [grid.lower[i], grid.upper[i], grid.lower[j], grid.upper[j]]
    positive = plane[plane > 0]
    if positive.size:
        norm = LogNorm(vmin=max(positive.min(), positive.max() * 1e-12), vmax=positive.max())
        image = ax.imshow(np.where(plane > 0, plane, np.nan).T, origin="lower", extent=extent, norm=norm)
        plt.colorbar(image, ax=ax, label="|residual|")
    else:
        ax.text(0.5, 0.5, "residual vanishes", transform=ax.transAxes, ha="center", va="center")
    names = ("r", "z") if grid.ndim == 2 else ("x", "y", "z")
    ax.set_xlabel(f"${names[i]}$")
    ax.set_ylabel(f"${names[j]}$")
    ax.set_title(f"{residual.report_name}: sup {residual.sup:.2e}")
    return ax
