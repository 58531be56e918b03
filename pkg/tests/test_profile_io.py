import numpy as np
import pytest
import yaml

from ssguard.classes import AxisymProfile, FixtureSpec, Grid3, Profile
from ssguard.errors import ProfileFormatError
from ssguard.io import load_profile, make_fixture, save_profile


@pytest.fixture
def blob():
    return make_fixture("gaussian-blob", grid=Grid3.centered(9, 2.0), amplitude=2.0)


def _rewrite_header(path, **changes):
    raw = path.read_bytes()
    cut = raw.find(b"\n...\n")
    header = yaml.safe_load(raw[:cut])
    header.update(changes)
    path.write_bytes(yaml.safe_dump(header).encode().rstrip(b"\n") + raw[cut:])


def test_sampled_round_trip(blob, tmp_path):
    path = save_profile(blob, tmp_path / "blob.ssp")
    loaded = load_profile(path)
    assert isinstance(loaded, Profile)
    assert loaded.gamma == blob.gamma
    assert loaded.grid.same_as(blob.grid)
    assert not loaded.U.is_analytic
    assert np.array_equal(loaded.Omega.values, blob.Omega.values_on(blob.grid))
    assert loaded.P is None


def test_fixture_record_rebuilds_closed_form(blob, tmp_path):
    spec = FixtureSpec("gaussian-blob", params={"amplitude": 2.0})
    path = save_profile(blob, tmp_path / "blob.ssp", fixture=spec)
    loaded = load_profile(path)
    assert loaded.Omega.is_analytic
    assert loaded.Omega.evaluate(np.zeros((1, 3)))[0, 2] == pytest.approx(2.0)
    assert not load_profile(path, prefer_analytic=False).Omega.is_analytic


def test_axisym_round_trip(axisym_strain, tmp_path):
    path = save_profile(axisym_strain, tmp_path / "strain.ssp")
    loaded = load_profile(path)
    assert isinstance(loaded, AxisymProfile)
    assert loaded.symmetry == "axisym"
    points = axisym_strain.grid.points()
    assert np.allclose(loaded.U_r.values, axisym_strain.U_r.evaluate(points))


def test_missing_header_terminator(tmp_path):
    path = tmp_path / "broken.ssp"
    path.write_bytes(b"format: ssp-1\ngamma: 0.4\n")
    with pytest.raises(ProfileFormatError) as err:
        load_profile(path)
    assert err.value.field == "format"


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"gamma": -0.4}, "gamma"),
        ({"format": "ssp-0"}, "format"),
        ({"symmetry": "helical"}, "symmetry"),
        ({"grid": {"dims": [9, 9], "spacing": [0.5, 0.5, 0.5], "origin": [-2, -2, -2]}}, "grid.dims"),
    ],
)
def test_malformed_header_fields(blob, tmp_path, changes, field):
    path = save_profile(blob, tmp_path / "blob.ssp")
    _rewrite_header(path, **changes)
    with pytest.raises(ProfileFormatError) as err:
        load_profile(path)
    assert err.value.field == field
    assert f"[{field}]" in str(err.value)


def test_manifest_errors(blob, tmp_path):
    path = save_profile(blob, tmp_path / "blob.ssp")
    header = yaml.safe_load(path.read_bytes().split(b"\n...\n")[0])
    manifest = header["arrays"]
    manifest[0]["length"] += 3
    _rewrite_header(path, arrays=manifest)
    with pytest.raises(ProfileFormatError) as err:
        load_profile(path)
    assert err.value.field == "arrays[0].length"

    manifest[0]["length"] -= 3
    manifest[1]["offset"] = 10**9
    _rewrite_header(path, arrays=manifest)
    with pytest.raises(ProfileFormatError) as err:
        load_profile(path)
    assert err.value.field == "arrays[1].offset"


def test_missing_required_field(blob, tmp_path):
    path = save_profile(blob, tmp_path / "blob.ssp")
    raw = path.read_bytes()
    cut = raw.find(b"\n...\n")
    header = yaml.safe_load(raw[:cut])
    del header["gamma"]
    path.write_bytes(yaml.safe_dump(header).encode().rstrip(b"\n") + raw[cut:])
    with pytest.raises(ProfileFormatError, match="required header field") as err:
        load_profile(path)
    assert err.value.field == "gamma"
