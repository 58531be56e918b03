from typing import Optional, Sequence

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.axes import Axes

from ..classes import MeridionalFixedPoint, MeridionalTrajectory, Trajectory


def plot_trajectories(
    trajectories: Sequence[Trajectory], ax: Optional[Axes] = None, plane: str = "xz"
) -> Axes:
    """Projections of self-similar trajectories Y(a, tau) onto a coordinate plane.

    Labels are marked with a dot, the last sample with a cross.
    """
    ax = ax if ax is not None else plt.gca()
    axes = {"x": 0, "y": 1, "z": 2}
    i, j = axes[plane[0]], axes[plane[1]]
    for traj in trajectories:
        (line,) = ax.plot(traj.positions[:, i], traj.positions[:, j], "-", lw=1)
        ax.plot(*traj.label[[i, j]], "o", ms=3, color=line.get_color())
        ax.plot(traj.positions[-1, i], traj.positions[-1, j], "x", ms=4, color=line.get_color())
    ax.set_xlabel(f"${plane[0]}$")
    ax.set_ylabel(f"${plane[1]}$")
    ax.set_title(f"Trajectories ({len(trajectories)})")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True)
    return ax


def plot_radial_growth(trajectories: Sequence[Trajectory], gamma: float, ax: Optional[Axes] = None) -> Axes:
    """|Y(a, tau)| / |a| against tau next to the pure-scaling growth exp(gamma tau)."""
    ax = ax if ax is not None else plt.gca()
    for traj in trajectories:
        norm = np.linalg.norm(traj.label)
        if norm > 0:
            ax.plot(traj.taus, traj.radii() / norm, "-", lw=1, alpha=0.7)
    if trajectories:
        taus = np.concatenate([t.taus for t in trajectories])
        grid = np.linspace(taus.min(), taus.max(), 200)
        ax.plot(grid, np.exp(gamma * grid), "k--", label=r"$e^{\gamma\tau}$")
        ax.legend(loc="upper left")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$|Y| / |a|$")
    ax.grid(True)
    return ax


def plot_meridional_flow(
    trajectories: Sequence[MeridionalTrajectory],
    fixed_points: Sequence[MeridionalFixedPoint] = (),
    ax: Optional[Axes] = None,
) -> Axes:
    """Meridional trajectories (R, Z) with the fixed points of the meridional field."""
    ax = ax if ax is not None else plt.gca()
    for traj in trajectories:
        ax.plot(traj.R, traj.Z, "-", lw=1, alpha=0.8)
    for point in fixed_points:
        marker = "*" if point.on_axis else "s"
        ax.plot(point.location[0], point.location[1], marker, color="red", ms=8, zorder=3)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlim(left=0.0)
    ax.set_xlabel("$r$")
    ax.set_ylabel("$z$")
    ax.set_title("Meridional flow")
    ax.grid(True)
    return ax
