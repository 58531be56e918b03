import io

import numpy as np
import pandas as pd
import pytest

from ssguard.classes import DiagnosticReport, ReportEntry
from ssguard.constants import TOOL_VERSION, VERDICT_FAIL, VERDICT_INCONCLUSIVE, VERDICT_PASS
from ssguard.io import dump_report, load_report, save_report, save_summary_csv


@pytest.fixture
def report():
    report = DiagnosticReport(profile={"gamma": 0.4, "grid": {"dims": [9, 9, 9]}})
    report.add(ReportEntry.check("res.div", "div U = 0", 1e-9, 1e-6, l2=np.float64(2e-10)))
    report.add(ReportEntry.check("res.velocity", "velocity form", 0.3, 1e-6))
    report.add(ReportEntry.info("fields.c_flat", "decay envelope", np.inf, location=np.zeros(3)))
    report.record("stretching.argmax", lambda: _raise())
    return report


def _raise():
    raise ValueError("the profile vanishes identically")


def test_entries_and_verdicts(report):
    assert report["res.div"].verdict == VERDICT_PASS
    assert report["res.velocity"].verdict == VERDICT_FAIL
    inconclusive = report["stretching.argmax"]
    assert inconclusive.verdict == VERDICT_INCONCLUSIVE
    assert "vanishes identically" in inconclusive.message
    assert report.exit_code() == 1
    assert report.verdict_counts() == {"PASS": 1, "FAIL": 1, "INCONCLUSIVE": 1, "INFO": 1}
    with pytest.raises(KeyError):
        report["flow.weber"]


def test_nan_residual_is_inconclusive():
    assert ReportEntry.check("x", "ref", float("nan"), 1.0).verdict == VERDICT_INCONCLUSIVE


def test_report_round_trip(report, tmp_path):
    path = save_report(report, tmp_path / "out" / "report.jsonl")
    loaded = load_report(path)
    assert loaded.tool_version == TOOL_VERSION
    assert loaded.profile == report.profile
    assert [e.name for e in loaded.entries] == [e.name for e in report.entries]
    assert loaded["fields.c_flat"].residual == np.inf
    assert loaded["fields.c_flat"].details["location"] == [0.0, 0.0, 0.0]
    assert loaded.strip_timing() == report.strip_timing()


def test_report_is_deterministic_without_timing(report):
    first, second = io.StringIO(), io.StringIO()
    dump_report(report.strip_timing(), first)
    dump_report(report.strip_timing(), second)
    assert first.getvalue() == second.getvalue()
    assert first.getvalue().splitlines()[0].startswith('{"profile"')


def test_load_report_errors(tmp_path):
    path = tmp_path / "report.jsonl"
    path.write_text("")
    with pytest.raises(ValueError, match="empty"):
        load_report(path)
    path.write_text('{"schema": "other", "tool_version": "0"}\n')
    with pytest.raises(ValueError, match="schema"):
        load_report(path)
    path.write_text("{not json\n")
    with pytest.raises(ValueError, match="malformed"):
        load_report(path)


def test_summary_csv(report, tmp_path):
    path = save_summary_csv(report, tmp_path / "summary.csv")
    df = pd.read_csv(path)
    assert df["name"].tolist() == [e.name for e in report.entries]
    assert df.loc[df["name"] == "res.velocity", "verdict"].item() == VERDICT_FAIL
