from dataclasses import dataclass

import numpy as np


@dataclass
class TimeSeries:
    """A nonnegative quantity sampled on [0, T_*) before a putative blowup time."""

    times: np.ndarray
    values: np.ndarray
    blowup_time: float
    name: str = "series"

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape or self.times.ndim != 1:
            raise ValueError(f"Series '{self.name}': times and values must be equally long 1D arrays.")
        if len(self.times) < 2:
            raise ValueError(f"Series '{self.name}' needs at least two samples.")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError(f"Series '{self.name}': times must be strictly increasing.")
        if self.times[-1] >= self.blowup_time:
            raise ValueError(
                f"Series '{self.name}': all times must lie strictly below T_* = {self.blowup_time}."
            )
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise ValueError(f"Series '{self.name}': values must be finite and nonnegative.")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def time_to_blowup(self) -> np.ndarray:
        return self.blowup_time - self.times

    def shares_time_base(self, other: "TimeSeries") -> bool:
        return (
            len(self) == len(other)
            and np.allclose(self.times, other.times, rtol=1e-12, atol=0)
            and self.blowup_time == other.blowup_time
        )


@dataclass
class ViscousSplitSpec:
    """Inputs of the viscous L4L2 criterion: outer budget, inner amplitude, exponent."""

    Gamma: float
    """Budget of the outer part, int_0^1 |omega_out|^4 dt <= Gamma."""
    C: float
    """Inner amplitude, |omega_in| <= C (1 - t)^(-1 + 3 gamma / 2)."""
    gamma: float

    def __post_init__(self):
        if self.Gamma < 0 or self.C < 0:
            raise ValueError("The viscous budget and amplitude must be nonnegative.")
        if not self.gamma > 0:
            raise ValueError(f"The similarity exponent must be positive (got {self.gamma}).")
