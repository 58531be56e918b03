from .report_plotting import plot_check_summary, plot_verdicts
from .residual_plotting import plot_residual_slice
from .trajectory_plotting import plot_meridional_flow, plot_radial_growth, plot_trajectories
from .util import save_figure
