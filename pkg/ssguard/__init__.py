from .calculations import *
from .classes import (
    AxisymProfile,
    DiagnosticReport,
    FieldSource,
    FixtureSpec,
    Grid3,
    Loop,
    MeridionalGrid,
    NormRequest,
    Profile,
    ReportEntry,
    TimeSeries,
    ViscousSplitSpec,
)
from .constants import ASSET_PATH, CONFIG, TOOL_VERSION
from .io import *
from .logger import LOGGER
from .plotting import *

__version__ = TOOL_VERSION
