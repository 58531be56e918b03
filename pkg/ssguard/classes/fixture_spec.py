from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .grid import RegularGrid


@dataclass
class FixtureSpec:
    """Request for a catalog profile: family name, parameters and target grid."""

    family: str
    params: Dict[str, Any] = field(default_factory=dict)
    """Overrides of the family's default parameters."""
    grid: Optional[RegularGrid] = None
    """Target grid; the family default is used when omitted."""
    symmetry: Optional[str] = None
    """Forces the cartesian or axisymmetric variant for families that have both."""
