"""Reading and writing the ssp-1 profile container.

An ssp-1 file is a YAML header document terminated by a ``...`` line, followed by a
payload of 64-bit little-endian floats. The header carries the format tag, gamma, the
symmetry, the grid record and an array manifest; each manifest entry gives the array
name, its rank, its offset in bytes from the start of the payload and its length in
float64 values. Arrays are stored row-major with the last index fastest, so vector
components come last.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml

from ..classes import AxisymProfile, FieldSource, FixtureSpec, Profile, RegularGrid, grid_from_dict
from ..constants import PROFILE_FORMAT_TAG, SYMMETRIES
from ..errors import ProfileFormatError
from ..logger import LOGGER

AnyProfile = Union[Profile, AxisymProfile]

_END_OF_HEADER = b"\n...\n"
_DTYPE = np.dtype("<f8")
CARTESIAN_ARRAYS = {"U": 3, "Omega": 3, "P": 1}
AXISYM_ARRAYS = {
    "U_r": 1,
    "U_theta": 1,
    "U_z": 1,
    "Omega_r": 1,
    "Omega_theta": 1,
    "Omega_z": 1,
    "P": 1,
    "U": 3,
    "Omega": 3,
}


def _decay_exponents(gamma: float) -> Dict[str, float]:
    """Far-field envelope exponents used beyond the sampled box: |U| ~ |y|^(1 - 1/gamma), |Omega| ~ |y|^(-1/gamma)."""
    k = 1.0 / gamma
    return {"U": max(k - 1.0, 0.0), "Omega": k, "P": 2.0 * max(k - 1.0, 0.0)}


def _split_header(raw: bytes) -> Tuple[Dict[str, Any], bytes]:
    cut = raw.find(_END_OF_HEADER)
    if cut < 0:
        raise ProfileFormatError("missing '...' line terminating the header", "format")
    try:
        header = yaml.safe_load(raw[:cut].decode("utf-8"))
    except (UnicodeDecodeError, yaml.YAMLError) as err:
        raise ProfileFormatError(f"header is not valid YAML: {err}", "format")
    if not isinstance(header, dict):
        raise ProfileFormatError("header must be a mapping", "format")
    return header, raw[cut + len(_END_OF_HEADER):]


def _require(header: Dict[str, Any], key: str) -> Any:
    if key not in header:
        raise ProfileFormatError("required header field is missing", key)
    return header[key]


def _parse_grid(header: Dict[str, Any], symmetry: str) -> RegularGrid:
    record = _require(header, "grid")
    if not isinstance(record, dict):
        raise ProfileFormatError("grid record must be a mapping", "grid")
    ndim = 2 if symmetry == "axisym" else 3
    for key in ("dims", "spacing", "origin"):
        value = record.get(key)
        if not isinstance(value, list) or len(value) != ndim:
            raise ProfileFormatError(f"expected a list of {ndim} numbers", f"grid.{key}")
    try:
        return grid_from_dict(record, symmetry)
    except (TypeError, ValueError) as err:
        raise ProfileFormatError(str(err), "grid")


def _parse_arrays(header: Dict[str, Any], payload: bytes, grid: RegularGrid, symmetry: str) -> Dict[str, np.ndarray]:
    manifest = _require(header, "arrays")
    if not isinstance(manifest, list) or not manifest:
        raise ProfileFormatError("array manifest must be a non-empty list", "arrays")
    allowed = AXISYM_ARRAYS if symmetry == "axisym" else CARTESIAN_ARRAYS
    arrays = {}
    for index, item in enumerate(manifest):
        where = f"arrays[{index}]"
        if not isinstance(item, dict):
            raise ProfileFormatError("manifest entries must be mappings", where)
        name = item.get("name")
        if name not in allowed:
            raise ProfileFormatError(f"unknown array '{name}' for symmetry '{symmetry}'", f"{where}.name")
        rank = item.get("rank")
        if rank != allowed[name]:
            raise ProfileFormatError(f"array '{name}' must have rank {allowed[name]}", f"{where}.rank")
        offset, length = item.get("offset"), item.get("length")
        if not isinstance(offset, int) or offset < 0 or offset % _DTYPE.itemsize:
            raise ProfileFormatError("offset must be a nonnegative multiple of 8", f"{where}.offset")
        expected = int(np.prod(grid.dims)) * rank
        if length != expected:
            raise ProfileFormatError(f"length {length} does not match the grid ({expected})", f"{where}.length")
        end = offset + length * _DTYPE.itemsize
        if end > len(payload):
            raise ProfileFormatError("array extends beyond the end of the payload", f"{where}.offset")
        values = np.frombuffer(payload, dtype=_DTYPE, count=length, offset=offset).astype(float)
        shape = grid.dims + ((3,) if rank == 3 else ())
        arrays[name] = values.reshape(shape)
    return arrays


def _sampled(values: np.ndarray, grid: RegularGrid, name: str, decay: float, symmetry: str) -> FieldSource:
    try:
        return FieldSource.sampled(values, grid, name=name, decay_exponent=decay, symmetry=symmetry)
    except ValueError as err:
        raise ProfileFormatError(str(err), name)


def _axisym_profile(
    header: Dict[str, Any], arrays: Dict[str, np.ndarray], grid: RegularGrid, gamma: float, name: str
) -> AxisymProfile:
    decay = _decay_exponents(gamma)
    for vector in ("U", "Omega"):
        if vector in arrays:
            for k, comp in enumerate(("r", "theta", "z")):
                arrays.setdefault(f"{vector}_{comp}", arrays[vector][..., k])
    missing = [n for n in ("U_r", "U_theta", "U_z") if n not in arrays]
    if missing:
        raise ProfileFormatError(f"missing velocity components {missing}", "arrays")
    fields = {
        key: _sampled(arrays[key], grid, key, decay[key.split("_")[0]], "axisym")
        for key in AXISYM_ARRAYS
        if key in arrays and key not in ("U", "Omega")
    }
    return AxisymProfile(gamma=gamma, c_flat=header.get("c_flat"), grid=grid, name=name, **fields)


def _fixture_profile(header: Dict[str, Any], grid: RegularGrid, gamma: float) -> Optional[AnyProfile]:
    record = header.get("fixture")
    if not record:
        return None
    from .fixture_catalog import build_fixture

    params = dict(record.get("params", {}))
    if params.get("gamma", gamma) != gamma:
        raise ProfileFormatError("fixture gamma differs from the header gamma", "fixture.params.gamma")
    params["gamma"] = gamma
    return build_fixture(FixtureSpec(family=record["family"], params=params, grid=grid))


def load_profile(path: Union[str, Path], prefer_analytic: bool = True) -> AnyProfile:
    """Loads an ssp-1 file.

    Files written from a catalog fixture record the family and its parameters; with
    ``prefer_analytic`` the closed-form fields are rebuilt on the stored grid instead of
    interpolating the samples.

    Raises
    ------
    ProfileFormatError
        Naming the first offending header field.
    """
    path = Path(path)
    header, payload = _split_header(path.read_bytes())
    tag = _require(header, "format")
    if tag != PROFILE_FORMAT_TAG:
        raise ProfileFormatError(f"unsupported format tag '{tag}'", "format")
    gamma = _require(header, "gamma")
    if not isinstance(gamma, (int, float)) or not gamma > 0:
        raise ProfileFormatError("gamma must be a positive number", "gamma")
    gamma = float(gamma)
    symmetry = _require(header, "symmetry")
    if symmetry not in SYMMETRIES:
        raise ProfileFormatError(f"symmetry must be one of {SYMMETRIES}", "symmetry")
    grid = _parse_grid(header, symmetry)
    arrays = _parse_arrays(header, payload, grid, symmetry)
    name = str(header.get("name", path.stem))

    if prefer_analytic:
        profile = _fixture_profile(header, grid, gamma)
        if profile is not None:
            LOGGER.debug(f"Rebuilt closed-form fixture '{header['fixture']['family']}' from {path}")
            return profile
    if symmetry == "axisym":
        return _axisym_profile(header, arrays, grid, gamma, name)
    if "U" not in arrays:
        raise ProfileFormatError("the velocity array 'U' is required", "arrays")
    decay = _decay_exponents(gamma)
    fields = {key: _sampled(value, grid, key, decay[key], "cartesian") for key, value in arrays.items()}
    return Profile(gamma=gamma, c_flat=header.get("c_flat"), grid=grid, name=name, **fields)


def _profile_arrays(profile: AnyProfile) -> Dict[str, np.ndarray]:
    if isinstance(profile, AxisymProfile):
        return {
            key: comp.values_on(profile.grid)
            for key, comp in profile.components().items()
            if comp is not None
        }
    fields = {"U": profile.U, "Omega": profile.Omega, "P": profile.P}
    return {key: f.values_on(profile.grid) for key, f in fields.items() if f is not None}


def save_profile(profile: AnyProfile, path: Union[str, Path], fixture: Optional[FixtureSpec] = None) -> Path:
    """Writes the profile's fields, sampled on its grid, as an ssp-1 file."""
    path = Path(path)
    arrays = _profile_arrays(profile)
    manifest: List[Dict[str, Any]] = []
    offset = 0
    for key, values in arrays.items():
        flat = np.ascontiguousarray(values, dtype=_DTYPE).ravel()
        manifest.append(
            {"name": key, "rank": 3 if values.ndim == profile.grid.ndim + 1 else 1, "offset": offset, "length": flat.size}
        )
        offset += flat.nbytes
    header = {
        "format": PROFILE_FORMAT_TAG,
        "name": profile.name,
        "gamma": float(profile.gamma),
        "symmetry": profile.symmetry,
        "grid": profile.grid.to_dict(),
        "arrays": manifest,
    }
    if profile.c_flat is not None:
        header["c_flat"] = float(profile.c_flat)
    if fixture is not None:
        header["fixture"] = {"family": fixture.family, "params": dict(fixture.params)}
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(yaml.safe_dump(header, sort_keys=False).encode("utf-8").rstrip(b"\n"))
        f.write(_END_OF_HEADER)
        for values in arrays.values():
            f.write(np.ascontiguousarray(values, dtype=_DTYPE).tobytes())
    LOGGER.info(f"Wrote profile '{profile.name}' ({', '.join(arrays)}) to {path}")
    return path
