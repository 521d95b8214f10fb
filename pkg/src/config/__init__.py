"""
Configuration management for the application.
"""
import argparse
from pathlib import Path
from typing import Optional

from .schema import (
    AdvConfig,
    CohortPrepConfig,
    EnsembleConfig,
    EvalConfig,
    LassoConfig,
    NNConfig,
    QcThresholds,
    RunConfig,
    SimConfig,
    SplitConfig,
    TrainConfig,
)
from .defaults import *
from .env import get_env_config_path, get_env_log_level, get_env_seed, load_env_file
from .yaml_config import apply_train_preset, dump_config, load_yaml_config, save_yaml_config
from .cli import BASELINES, ENSEMBLE_MODES, SUBCOMMANDS, build_parser, parse_args


def load_config(args: Optional[argparse.Namespace] = None, config_path: Optional[Path] = None) -> RunConfig:
    """
    Load configuration from all sources in priority order:
    1. Command line arguments (highest priority)
    2. Environment variables
    3. YAML config file
    4. Default values (lowest priority)

    A file named explicitly (argument, -c or DISPRED_CONFIG) must exist;
    the default settings.yaml is optional.
    """
    load_env_file()

    explicit = config_path or (getattr(args, "config", None) if args is not None else None) or get_env_config_path()
    if explicit is not None:
        config = load_yaml_config(Path(explicit), required=True)
    else:
        config = load_yaml_config(DEFAULT_CONFIG_PATH) or RunConfig()

    # Environment overrides
    env_level = get_env_log_level()
    if env_level:
        config.log_level = env_level
    seed = get_env_seed()
    if seed is None:
        seed = config.seed

    # Command line overrides
    if args is not None:
        if getattr(args, "log_level", None):
            config.log_level = args.log_level
        if getattr(args, "seed", None) is not None:
            seed = args.seed
        if getattr(args, "preset", None):
            apply_train_preset(config, args.preset)
        if getattr(args, "cutoff", None) is not None:
            config.eval.cutoff = args.cutoff
        if getattr(args, "window", None) is not None:
            config.eval.window = args.window
        if getattr(args, "stride", None) is not None:
            config.eval.stride = args.stride

    config.with_seed(seed)

    # Validate final configuration
    config.validate()

    return config
