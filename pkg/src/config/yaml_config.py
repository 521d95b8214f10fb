"""
YAML configuration file handling.
"""
import dataclasses
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from errors import ConfigError
from utils import atomic_write_text
from .defaults import *
from .schema import RunConfig

logger = logging.getLogger(__name__)

_TOP_LEVEL_SCALARS = ("seed", "log_level")


def _coerce(value: Any, current: Any, key: str) -> Any:
    """Convert a YAML value to the type of the field's current value."""
    if isinstance(current, tuple) or (current is None and isinstance(value, list)):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key} must be a list, got {value!r}")
        return tuple(value)
    if isinstance(current, bool) or isinstance(value, bool):
        return value
    if isinstance(current, float) and isinstance(value, int):
        return float(value)
    if isinstance(current, int) and isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _apply_section(section: Any, values: Dict[str, Any], prefix: str) -> None:
    if not isinstance(values, dict):
        raise ConfigError(f"{prefix} must be a mapping, got {type(values).__name__}")
    known = {f.name for f in dataclasses.fields(section)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"unknown configuration key: {prefix}.{key}")
        setattr(section, key, _coerce(value, getattr(section, key), f"{prefix}.{key}"))


def apply_train_preset(config: RunConfig, preset: str) -> None:
    """Seed the training and network sections with a named cohort-scale preset."""
    if preset not in TRAIN_PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(TRAIN_PRESETS)}")
    _apply_section(config.train, TRAIN_PRESETS[preset], "train")
    _apply_section(config.nn, NN_PRESETS[preset], "nn")


def parse_config_dict(raw: Dict[str, Any], config: Optional[RunConfig] = None) -> RunConfig:
    """Merge a parsed YAML mapping into ``config`` (defaults when omitted)."""
    config = config or RunConfig()
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a mapping")
    for key, value in raw.items():
        if key in _TOP_LEVEL_SCALARS:
            setattr(config, key, _coerce(value, getattr(config, key), key))
        elif key == "preset":
            apply_train_preset(config, value)
        elif key in RunConfig.SECTIONS:
            section_values = dict(value or {})
            if key == "train" and "preset" in section_values:
                apply_train_preset(config, section_values.pop("preset"))
            _apply_section(getattr(config, key), section_values, key)
        else:
            raise ConfigError(f"unknown configuration key: {key}")
    return config


def load_yaml_config(config_path: Path, config: Optional[RunConfig] = None,
                     required: bool = False) -> Optional[RunConfig]:
    """Load configuration from YAML file; a missing file gives None, or ConfigError when ``required``."""
    config_path = Path(config_path)
    if not config_path.exists():
        if required:
            raise ConfigError(f"configuration file not found: {config_path}")
        return None

    try:
        with open(config_path, encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {config_path}: {e}") from e

    if not raw:
        return config or RunConfig()

    logger.debug(f"Loaded configuration file {config_path}")
    return parse_config_dict(raw, config)


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dump_config(config: RunConfig) -> str:
    return yaml.safe_dump(_plain(config.to_dict()), default_flow_style=False, sort_keys=False)


def save_yaml_config(config: RunConfig, config_path: Path) -> None:
    """Save the fully resolved configuration to a YAML file."""
    atomic_write_text(config_path, dump_config(config))
