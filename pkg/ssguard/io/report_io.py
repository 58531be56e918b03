"""JSON-lines diagnostic reports and their CSV summary.

The first line holds the header ``{"schema", "tool_version", "profile"}``, every
following line one entry. Keys are sorted so identical runs produce identical files
once wall times are stripped; non-finite numbers use the ``NaN``/``Infinity`` tokens.
"""

import json
from pathlib import Path
from typing import IO, Union

from ..classes import DiagnosticReport, ReportEntry
from ..constants import REPORT_SCHEMA
from ..logger import LOGGER


def dump_report(report: DiagnosticReport, stream: IO[str]):
    header = {"schema": REPORT_SCHEMA, **report.header()}
    stream.write(json.dumps(header, sort_keys=True) + "\n")
    for entry in report.entries:
        stream.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")


def save_report(report: DiagnosticReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        dump_report(report, f)
    LOGGER.info(f"Saved report with {len(report)} entries to {path}")
    return path


def load_report(path: Union[str, Path]) -> DiagnosticReport:
    path = Path(path)
    with open(path) as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty report file.")
    try:
        header = json.loads(lines[0])
        entries = [ReportEntry.from_dict(json.loads(line)) for line in lines[1:]]
    except (json.JSONDecodeError, KeyError) as err:
        raise ValueError(f"{path}: malformed report line ({err}).")
    if header.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"{path}: unsupported report schema '{header.get('schema')}'.")
    LOGGER.debug(f"Loaded {len(entries)} report entries from {path}.")
    return DiagnosticReport(
        profile=header.get("profile", {}), entries=entries, tool_version=header["tool_version"]
    )


def save_summary_csv(report: DiagnosticReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    report.to_dataframe().to_csv(path, index=False)
    LOGGER.debug(f"Saved report summary to {path}")
    return path
