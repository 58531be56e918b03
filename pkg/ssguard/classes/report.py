import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..constants import (
    TOOL_VERSION,
    VERDICT_FAIL,
    VERDICT_INCONCLUSIVE,
    VERDICT_INFO,
    VERDICT_PASS,
    VERDICTS,
)


def _plain(value: Any) -> Any:
    """Converts numpy scalars and arrays into plain Python values."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class ReportEntry:
    """One named check with its residual, tolerance and verdict."""

    name: str
    reference: str
    """The identity, bound or obstruction the check evaluates."""
    residual: Optional[float]
    tolerance: Optional[float]
    verdict: str
    wall_time: float = 0.0
    message: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"Unknown verdict '{self.verdict}'.")
        if self.residual is not None:
            self.residual = float(self.residual)
        if self.tolerance is not None:
            self.tolerance = float(self.tolerance)
        self.details = _plain(self.details)

    @classmethod
    def check(
        cls,
        name: str,
        reference: str,
        residual: float,
        tolerance: float,
        message: str = "",
        **details,
    ) -> "ReportEntry":
        """Entry that FAILs iff residual > tolerance; a nan residual is INCONCLUSIVE."""
        residual = float(residual)
        if math.isnan(residual):
            verdict = VERDICT_INCONCLUSIVE
        else:
            verdict = VERDICT_FAIL if residual > tolerance else VERDICT_PASS
        return cls(name, reference, residual, tolerance, verdict, message=message, details=details)

    @classmethod
    def info(
        cls, name: str, reference: str, value: Optional[float] = None, message: str = "", **details
    ) -> "ReportEntry":
        return cls(name, reference, value, None, VERDICT_INFO, message=message, details=details)

    @classmethod
    def inconclusive(
        cls, name: str, reference: str, message: str, residual: Optional[float] = None, **details
    ) -> "ReportEntry":
        return cls(
            name, reference, residual, None, VERDICT_INCONCLUSIVE, message=message, details=details
        )

    @classmethod
    def outcome(
        cls, name: str, reference: str, passed: bool, message: str = "",
        residual: Optional[float] = None, tolerance: Optional[float] = None, **details
    ) -> "ReportEntry":
        verdict = VERDICT_PASS if passed else VERDICT_FAIL
        return cls(name, reference, residual, tolerance, verdict, message=message, details=details)

    @property
    def failed(self) -> bool:
        return self.verdict == VERDICT_FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "reference": self.reference,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "wall_time": self.wall_time,
            "message": self.message,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportEntry":
        return cls(
            name=data["name"],
            reference=data["reference"],
            residual=data["residual"],
            tolerance=data["tolerance"],
            verdict=data["verdict"],
            wall_time=data.get("wall_time", 0.0),
            message=data.get("message", ""),
            details=data.get("details", {}),
        )


EntryBuilder = Callable[[], Union[ReportEntry, Sequence[ReportEntry]]]


@dataclass
class DiagnosticReport:
    """A structured collection of checks run against one profile."""

    profile: Dict[str, Any] = field(default_factory=dict)
    """Profile metadata (gamma, symmetry, grid, norms)."""
    entries: List[ReportEntry] = field(default_factory=list)
    tool_version: str = TOOL_VERSION

    def __post_init__(self):
        self.profile = _plain(self.profile)

    def add(self, entry: Union[ReportEntry, Sequence[ReportEntry]]):
        if isinstance(entry, ReportEntry):
            self.entries.append(entry)
        else:
            self.entries.extend(entry)

    def record(self, name: str, builder: EntryBuilder, reference: str = "") -> List[ReportEntry]:
        """Runs a check, stamps its wall time and turns domain errors into INCONCLUSIVE entries."""
        start = time.perf_counter()
        try:
            produced = builder()
        except ValueError as err:
            produced = ReportEntry.inconclusive(
                name, reference, f"{type(err).__name__}: {err}", error=type(err).__name__
            )
        elapsed = time.perf_counter() - start
        produced = [produced] if isinstance(produced, ReportEntry) else list(produced)
        for entry in produced:
            entry.wall_time = elapsed / max(len(produced), 1)
        self.entries.extend(produced)
        return produced

    def __getitem__(self, name: str) -> ReportEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(f"No report entry named '{name}'.")

    def __contains__(self, name: str) -> bool:
        return any(entry.name == name for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def has_failures(self) -> bool:
        return any(entry.failed for entry in self.entries)

    def exit_code(self) -> int:
        """0 if no entry failed, 1 otherwise."""
        return 1 if self.has_failures else 0

    def verdict_counts(self) -> Dict[str, int]:
        counts = {verdict: 0 for verdict in VERDICTS}
        for entry in self.entries:
            counts[entry.verdict] += 1
        return counts

    def to_dataframe(self) -> pd.DataFrame:
        """One row per entry, without the free-form details."""
        columns = ["name", "verdict", "residual", "tolerance", "wall_time", "reference", "message"]
        rows = [{col: entry.to_dict()[col] for col in columns} for entry in self.entries]
        return pd.DataFrame(rows, columns=columns)

    def header(self) -> Dict[str, Any]:
        return {"tool_version": self.tool_version, "profile": self.profile}

    def strip_timing(self) -> "DiagnosticReport":
        """Copy with all wall times zeroed (for reproducibility comparisons)."""
        entries = [ReportEntry.from_dict({**e.to_dict(), "wall_time": 0.0}) for e in self.entries]
        return DiagnosticReport(profile=dict(self.profile), entries=entries, tool_version=self.tool_version)
