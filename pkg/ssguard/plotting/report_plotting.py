from typing import Optional, Sequence

import matplotlib.pyplot as plt
from matplotlib.figure import Figure
from matplotlib.gridspec import GridSpec

from ..classes import DiagnosticReport, MeridionalTrajectory, ResidualField, Trajectory
from .residual_plotting import plot_residual_slice
from .trajectory_plotting import plot_meridional_flow, plot_trajectories
from .util import VERDICT_COLORS


def _summary_text(report: DiagnosticReport) -> str:
    meta = report.profile
    counts = ", ".join(f"{k}: {v}" for k, v in report.verdict_counts().items() if v)
    lines = [f"{meta.get('name', 'profile')} (gamma = {meta.get('gamma')}, {meta.get('symmetry')})", counts]
    lines += [f"FAIL  {e.name}" for e in report.entries if e.failed][:12]
    return "\n".join(lines)


def plot_verdicts(report: DiagnosticReport, ax: Optional[plt.Axes] = None) -> plt.Axes:
    """One bar per entry holding a residual and a tolerance: residual / tolerance, coloured by verdict."""
    ax = ax if ax is not None else plt.gca()
    checked = [e for e in report.entries if e.tolerance and e.residual is not None]
    ratios = [max(e.residual / e.tolerance, 1e-16) for e in checked]
    ax.barh(range(len(checked)), ratios, color=[VERDICT_COLORS[e.verdict] for e in checked])
    ax.axvline(1.0, color="k", lw=1)
    ax.set_yticks(range(len(checked)))
    ax.set_yticklabels([e.name for e in checked], fontsize=7)
    ax.set_xscale("log")
    ax.set_xlabel("residual / tolerance")
    ax.invert_yaxis()
    return ax


def plot_check_summary(
    report: DiagnosticReport,
    residuals: Sequence[ResidualField] = (),
    trajectories: Sequence[Trajectory] = (),
) -> Figure:
    """Summary of a ``check`` run: verdict overview, the worst residual slice and the trajectories."""
    fig = plt.figure(figsize=(12, 9))
    gs = GridSpec(2, 2)
    text_ax = fig.add_subplot(gs[0, 0])
    text_ax.axis("off")
    text_ax.text(
        0.0,
        1.0,
        _summary_text(report),
        ha="left",
        va="top",
        family="monospace",
        bbox={"boxstyle": "round", "facecolor": "wheat", "alpha": 0.5},
    )
    plot_verdicts(report, fig.add_subplot(gs[0, 1]))
    if residuals:
        worst = max(residuals, key=lambda res: res.sup)
        plot_residual_slice(worst, fig.add_subplot(gs[1, 0]))
    if trajectories and isinstance(trajectories[0], MeridionalTrajectory):
        plot_meridional_flow(trajectories, ax=fig.add_subplot(gs[1, 1]))
    elif trajectories:
        plot_trajectories(trajectories, fig.add_subplot(gs[1, 1]))
    fig.tight_layout()
    return fig
