import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..logger import LOGGER
from .config_io import load_config_dict
from .constants import THREADS_ENV_VAR


@dataclass
class SSGConfig:
    """Dataclass to manage the ssguard configuration (tolerances and numerical parameters)."""

    user_path: Optional[Path] = None
    """Optional path of a user override file; defaults to ~/.ssguard/config.yml."""
    _data: Dict[str, Dict[str, Any]] = field(init=False, repr=False)
    _tol_scale: float = field(default=1.0, init=False)

    def __post_init__(self):
        self._data = load_config_dict(self.user_path)

    def __getitem__(self, section: str) -> Dict[str, Any]:
        return self._data[section]

    def get(self, section: str, key: str) -> Any:
        """Returns a raw configuration value."""
        return self._data[section][key]

    def tolerance(self, name: str) -> float:
        """Returns the named tolerance, multiplied by the current tolerance scale."""
        return float(self._data["tolerances"][name]) * self._tol_scale

    @property
    def tol_scale(self) -> float:
        return self._tol_scale

    @tol_scale.setter
    def tol_scale(self, value: float):
        if value <= 0:
            raise ValueError(f"Tolerance scale must be positive, not {value}.")
        self._tol_scale = float(value)
        LOGGER.info(f"Tolerance scale updated to: {self._tol_scale}")

    @property
    def threads(self) -> int:
        """The worker cap for data-parallel loops (SSGUARD_THREADS takes precedence)."""
        env_val = os.environ.get(THREADS_ENV_VAR)
        if env_val:
            try:
                return max(1, int(env_val))
            except ValueError:
                LOGGER.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={env_val!r}")
        configured = int(self._data["runtime"]["threads"])
        return configured if configured > 0 else (os.cpu_count() or 1)

    def override(self, section: str, key: str, value: Union[int, float, str]):
        """Overrides a single value, e.g. from a command-line flag."""
        if key not in self._data[section]:
            raise KeyError(f"Unknown configuration key '{section}.{key}'.")
        self._data[section][key] = value
        LOGGER.debug(f"Configuration {section}.{key} set to {value!r}")

    def tolerance_table(self) -> Dict[str, float]:
        """All tolerances as used (scaled)."""
        return {key: self.tolerance(key) for key in self._data["tolerances"]}
