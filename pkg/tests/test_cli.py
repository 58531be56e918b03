import numpy as np
import pytest

from ssguard.constants import VERDICT_FAIL, VERDICT_PASS
from ssguard.io import load_profile, load_report
from ssguard.scripts.ssguard_cli import main, parse_args


@pytest.fixture
def fixture_file(tmp_path):
    def write(family, *params, symmetry=None):
        path = tmp_path / f"{family}.ssp"
        argv = ["fixture", family, *params, "-o", str(path)]
        if symmetry is not None:
            argv += ["--symmetry", symmetry]
        assert main(argv) == 0
        return path

    return write


def test_fixture_writes_a_loadable_profile(fixture_file):
    path = fixture_file("rigid-rotation", "omega=0.5")
    profile = load_profile(path)
    assert profile.name == "rigid-rotation"
    assert profile.U.evaluate(np.array([[1.0, 0.0, 0.0]]))[0] == pytest.approx([0.0, 0.5, 0.0])


def test_fixture_needs_an_output_path():
    assert main(["fixture", "trivial"]) == 2


def test_fixture_rejects_out_of_range_parameters(tmp_path):
    assert main(["fixture", "trivial", "gamma=5", "-o", str(tmp_path / "t.ssp")]) == 2


def test_check_trivial_passes(fixture_file, tmp_path):
    report_path = tmp_path / "trivial.jsonl"
    assert main(["check", str(fixture_file("trivial")), "-o", str(report_path)]) == 0
    report = load_report(report_path)
    residuals = [e for e in report.entries if e.name.startswith("res.")]
    assert residuals
    for entry in residuals:
        assert entry.verdict == VERDICT_PASS
        assert entry.residual == 0.0
    assert "tolerances" in report.profile
    assert report_path.with_suffix(".csv").exists()


def test_check_burgers_fails(fixture_file, tmp_path):
    report_path = tmp_path / "burgers.jsonl"
    assert main(["check", str(fixture_file("burgers")), "--no-flow", "-o", str(report_path)]) == 1
    assert load_report(report_path)["res.velocity"].verdict == VERDICT_FAIL


def test_residual_with_gamma_override(fixture_file, tmp_path):
    report_path = tmp_path / "res.jsonl"
    path = fixture_file("trivial", "gamma=0.4")
    assert main(["residual", str(path), "--gamma-override", "0.3", "-o", str(report_path)]) == 0
    assert load_report(report_path).profile["gamma"] == 0.3


def test_criteria_gamma_bound_prints_two_fifths(capsys):
    assert main(["criteria", "--gamma-bound", "2"]) == 0
    assert "criteria.gamma_bound: 0.4" in capsys.readouterr().out


def test_criteria_viscous_report(tmp_path):
    report_path = tmp_path / "criteria.jsonl"
    assert main(["criteria", "--viscous", "1", "1", "0.6", "-o", str(report_path)]) == 0
    assert load_report(report_path)["criteria.viscous"].residual == pytest.approx(42.666666666666, abs=1e-9)


def test_criteria_without_inputs_is_a_usage_error():
    assert main(["criteria"]) == 2


def test_malformed_profile_exits_with_two(tmp_path):
    path = tmp_path / "broken.ssp"
    path.write_bytes(b"format: ssp-1\ngamma: -1\nsymmetry: cartesian\n...\n")
    assert main(["check", str(path)]) == 2


def test_missing_profile_exits_with_two(tmp_path):
    assert main(["residual", str(tmp_path / "nothing.ssp")]) == 2


def test_wrong_symmetry_exits_with_two(fixture_file):
    assert main(["stretching", str(fixture_file("linear-strain", symmetry="axisym"))]) == 2


def test_axisym_fixed_points(fixture_file, tmp_path):
    report_path = tmp_path / "fp.jsonl"
    path = fixture_file("off-axis-zero")
    assert main(["axisym", str(path), "fixed-points", "-o", str(report_path)]) == 1
    report = load_report(report_path)
    assert report["axisym.fixed_points"].residual >= 2


def test_usage_errors_exit_through_argparse():
    with pytest.raises(SystemExit) as err:
        parse_args(["flow", "profile.ssp", "--tau", "1:1"])
    assert err.value.code == 2
    with pytest.raises(SystemExit):
        parse_args([])


def test_unknown_log_level_is_a_usage_error():
    assert main(["criteria", "--gamma-bound", "2", "--loglevel", "chatty"]) == 2
