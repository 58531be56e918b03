import io
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..classes import Loop, TimeSeries
from ..logger import LOGGER


def _load_columns(path: Union[str, Path], num_columns: int) -> np.ndarray:
    """Whitespace- or comma-separated numeric columns, '#' starts a comment."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"No such file: {path}")
    text = path.read_text().replace(",", " ")
    df = pd.read_csv(
        io.StringIO(text), sep=r"\s+", comment="#", header=None, float_precision="round_trip"
    )
    df = df.dropna(axis=1, how="all")
    if df.shape[1] != num_columns:
        raise ValueError(f"{path}: expected {num_columns} columns per line, found {df.shape[1]}.")
    values = df.to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: contains non-finite entries.")
    return values


def load_series(path: Union[str, Path], blowup_time: float, name: Optional[str] = None) -> TimeSeries:
    """Loads a two-column (time, value) text file as a series ending before ``blowup_time``."""
    data = _load_columns(path, 2)
    series = TimeSeries(
        times=data[:, 0], values=data[:, 1], blowup_time=blowup_time, name=name or Path(path).stem
    )
    LOGGER.debug(f"Loaded series '{series.name}' with {len(series)} samples from {path}.")
    return series


def save_series(series: TimeSeries, path: Union[str, Path]) -> Path:
    path = Path(path)
    df = pd.DataFrame({"t": series.times, series.name: series.values})
    with open(path, "w") as f:
        f.write(f"# {series.name}, T_* = {series.blowup_time!r}\n")
        df.to_csv(f, sep=" ", header=False, index=False, float_format="%.17g")
    return path


def load_points(path: Union[str, Path], dim: int = 3) -> np.ndarray:
    """One point per line, ``dim`` coordinates each; used for seeds, loop and polygon vertices."""
    points = _load_columns(path, dim)
    LOGGER.debug(f"Loaded {len(points)} points from {path}.")
    return points


def load_loop(path: Union[str, Path], orientation: int = 1) -> Loop:
    return Loop(vertices=load_points(path, 3), orientation=orientation)
