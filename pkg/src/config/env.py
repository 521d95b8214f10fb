"""
Environment variable configuration handling.
"""
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError
from .defaults import *


def load_env_file() -> None:
    """Load a .env file from the working directory if present."""
    env_file = Path('.env')
    if env_file.exists():
        load_dotenv(env_file)


def get_env_config_path() -> Optional[Path]:
    """Configuration file named by DISPRED_CONFIG, if set."""
    config_path = os.getenv("DISPRED_CONFIG")
    if config_path:
        return Path(config_path)
    return None


def get_env_seed() -> Optional[int]:
    value = os.getenv("DISPRED_SEED")
    if value is None or value == "":
        return None
    try:
        seed = int(value)
    except ValueError:
        raise ConfigError(f"Environment variable 'DISPRED_SEED' must be a non-negative integer, got '{value}'")
    if seed < 0:
        raise ConfigError(f"Environment variable 'DISPRED_SEED' must be a non-negative integer, got '{value}'")
    return seed


def get_env_log_level() -> Optional[str]:
    return os.getenv("DISPRED_LOG_LEVEL") or None
