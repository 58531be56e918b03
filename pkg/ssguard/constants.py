from pathlib import Path

from .setup import SSGConfig

CONFIG = SSGConfig()
"""The global configuration object for ssguard."""

ROOT_DIR = Path(__file__).parent
ASSET_PATH = ROOT_DIR / "assets"

TOOL_VERSION = "0.1.0"
"""Version string echoed into every diagnostic report."""
REPORT_SCHEMA = "ssguard-report/1"
"""Schema tag of the line-delimited report format."""
PROFILE_FORMAT_TAG = "ssp-1"
"""Format tag of the profile container."""

VERDICT_PASS = "PASS"
VERDICT_FAIL = "FAIL"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"
VERDICT_INFO = "INFO"
VERDICTS = (VERDICT_PASS, VERDICT_FAIL, VERDICT_INCONCLUSIVE, VERDICT_INFO)

SYMMETRIES = ("cartesian", "axisym")
BOUNDARY_POLICIES = ("decay", "periodic")
