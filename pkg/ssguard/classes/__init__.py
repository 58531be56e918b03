from .grid import Grid3, MeridionalGrid, RegularGrid, grid_from_dict
from .field_source import FieldSource, jacobian_magnitude, magnitude
from .profile import AxisymProfile, Profile
from .norm_request import NormEstimate, NormRequest
from .results import (
    ALPHA_LIMIT_CLASSES,
    AlphaBoundResult,
    AlphaLimitResult,
    BernoulliData,
    EllMuResult,
    ResidualField,
    SmallnessReport,
    StretchingResult,
    TailFit,
    ViscousResult,
)
from .trajectory import IntegratorStats, MeridionalTrajectory, Trajectory
from .loop import Loop
from .nodal_point import MeridionalFixedPoint, NodalPoint, VanishingOrder
from .time_series import TimeSeries, ViscousSplitSpec
from .report import DiagnosticReport, ReportEntry
from .fixture_spec import FixtureSpec
