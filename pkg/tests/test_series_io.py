import numpy as np
import pytest

from ssguard.classes import TimeSeries
from ssguard.io import load_loop, load_points, load_series, save_series


def test_series_round_trip(tmp_path):
    series = TimeSeries(np.linspace(0.0, 0.9, 10), np.geomspace(1.0, 100.0, 10), 1.0, name="gradw")
    path = save_series(series, tmp_path / "gradw.txt")
    loaded = load_series(path, blowup_time=1.0)
    assert loaded.name == "gradw"
    assert np.array_equal(loaded.times, series.times)
    assert np.array_equal(loaded.values, series.values)


def test_series_accepts_commas_and_comments(tmp_path):
    path = tmp_path / "energy.csv"
    path.write_text("# t, E\n0.0, 1.0\n0.5, 2.0\n0.75,4.0\n")
    series = load_series(path, blowup_time=1.0)
    assert series.values.tolist() == [1.0, 2.0, 4.0]
    assert series.time_to_blowup.tolist() == [1.0, 0.5, 0.25]


def test_series_validation(tmp_path):
    path = tmp_path / "late.txt"
    path.write_text("0.0 1.0\n1.0 2.0\n")
    with pytest.raises(ValueError, match="strictly below"):
        load_series(path, blowup_time=1.0)
    path.write_text("0.0 1.0 3.0\n0.5 2.0 4.0\n")
    with pytest.raises(ValueError, match="2 columns"):
        load_series(path, blowup_time=1.0)
    with pytest.raises(FileNotFoundError):
        load_series(tmp_path / "missing.txt", blowup_time=1.0)
    with pytest.raises(ValueError, match="nonnegative"):
        TimeSeries([0.0, 0.5], [1.0, -1.0], 1.0)


def _write_circle(path, n=16):
    phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    lines = [f"{np.cos(a):.17g} {np.sin(a):.17g} 0" for a in phi]
    path.write_text("\n".join(lines) + "\n")


def test_points_and_loops(tmp_path):
    path = tmp_path / "circle.txt"
    _write_circle(path)
    assert load_points(path).shape == (16, 3)
    loop = load_loop(path, orientation=-1)
    assert loop.num_vertices == 16
    assert np.array_equal(loop.vertices[0], loop.vertices[-1])
    assert loop.orientation == -1
    with pytest.raises(ValueError):
        load_points(path, dim=2)


def test_short_loops_are_rejected(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text("1 0 0\n0 1 0\n-1 0 0\n0 -1 0\n")
    with pytest.raises(ValueError, match="at least 16"):
        load_loop(path)
