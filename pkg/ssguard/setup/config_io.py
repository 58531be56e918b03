from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..logger import LOGGER
from .constants import DEFAULT_CONFIG_PATH, USER_CONFIG_PATH


def read_yaml(path: Path) -> Dict[str, Any]:
    """Reads a YAML mapping from the given path."""
    with open(path, "r") as f:
        data = yaml.safe_load(f)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"Configuration file {path} does not contain a mapping.")
    return data


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merges the override mapping into a copy of base.

    Keys unknown to base are rejected so that typos in a user config do not pass silently.
    """
    merged = {key: (dict(val) if isinstance(val, dict) else val) for key, val in base.items()}
    for key, val in override.items():
        if key not in merged:
            raise KeyError(f"Unknown configuration key '{key}'.")
        if isinstance(merged[key], dict):
            if not isinstance(val, dict):
                raise ValueError(f"Configuration section '{key}' must be a mapping.")
            merged[key] = merge_config(merged[key], val)
        else:
            merged[key] = val
    return merged


def validate_config(config: Dict[str, Any]):
    """Checks that all tolerances are positive numbers."""
    for key, val in config["tolerances"].items():
        if not isinstance(val, (int, float)) or val <= 0:
            raise ValueError(f"Tolerance '{key}' must be a positive number, not {val!r}.")


def load_config_dict(user_path: Optional[Path] = None) -> Dict[str, Any]:
    """Loads the default configuration table, merged with the user file if it exists."""
    if not DEFAULT_CONFIG_PATH.exists():
        raise FileNotFoundError(
            f"Default configuration file not found: {DEFAULT_CONFIG_PATH}"
        )
    config = read_yaml(DEFAULT_CONFIG_PATH)
    user_path = USER_CONFIG_PATH if user_path is None else Path(user_path)
    if user_path.exists():
        LOGGER.debug(f"Merging user configuration from {user_path}")
        config = merge_config(config, read_yaml(user_path))
    validate_config(config)
    return config
