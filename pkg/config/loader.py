"""
Configuration loader for experiment runs.

Values are merged from three layers, lowest precedence first:
.env / environment defaults, an optional JSON or YAML config file, and
explicit command-line flags.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from utils.errors import ConfigError, ParseError
from utils.logger import logger, set_log_level

ENV_FIELDS = {
    'REGENMC_OUTPUT_DIR': 'output_dir',
}


def load_from_file(file_path: str) -> Dict[str, Any]:
    """
    Load an experiment configuration from a JSON or YAML file.

    Keys may use dashes or underscores (`h-scale` and `h_scale` are the same
    field).

    Args:
        file_path: Path to a .json, .yaml or .yml file

    Returns:
        Dictionary of configuration values

    Raises:
        ConfigError: If the file is missing, empty, has an unknown suffix or
            does not hold a mapping
        ParseError: If the JSON/YAML cannot be parsed
    """
    path = Path(file_path)
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {file_path}")

    logger.info(f"Loading configuration from {file_path}")
    suffix = path.suffix.lower()
    text = path.read_text(encoding='utf-8')

    try:
        if suffix == '.json':
            data = json.loads(text)
        elif suffix in ('.yaml', '.yml'):
            data = yaml.safe_load(text)
        else:
            raise ConfigError(
                f"Unsupported configuration format '{suffix}' (use .json, .yaml or .yml)"
            )
    except json.JSONDecodeError as e:
        logger.error(f"Failed to parse JSON file {file_path}: {e}")
        raise ParseError(str(path), e.lineno, e.msg)
    except yaml.YAMLError as e:
        logger.error(f"Failed to parse YAML file {file_path}: {e}")
        mark = getattr(e, 'problem_mark', None)
        raise ParseError(str(path), mark.line + 1 if mark is not None else None, str(e))

    if not data:
        raise ConfigError(f"Configuration file is empty: {file_path}")
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration file must hold a mapping: {file_path}")

    return {str(key).replace('-', '_'): value for key, value in data.items()}


def load_env_defaults(env_file: str = '.env') -> Dict[str, Any]:
    """
    Read defaults from the process environment after loading an optional .env.

    Only REGENMC_OUTPUT_DIR maps onto a config field; REGENMC_LOG_LEVEL is
    applied to the shared logger.

    Args:
        env_file: Path to a .env file (silently skipped when absent)

    Returns:
        Dictionary of default values
    """
    if os.path.exists(env_file):
        load_dotenv(env_file)
        logger.debug(f"Environment defaults loaded from {env_file}")

    level = os.getenv('REGENMC_LOG_LEVEL')
    if level:
        try:
            set_log_level(level)
        except ValueError as e:
            raise ConfigError(f"REGENMC_LOG_LEVEL: {e}")

    defaults = {}
    for variable, field in ENV_FIELDS.items():
        value = os.getenv(variable)
        if value:
            defaults[field] = value
    return defaults


def auto_load_configuration(
    config_path: Optional[str] = None,
    flags: Optional[Dict[str, Any]] = None,
    env_file: str = '.env'
) -> Dict[str, Any]:
    """
    Merge environment defaults, config file and flags into one dictionary.

    Flags whose value is None were not given and never override.

    Args:
        config_path: Optional JSON/YAML config file
        flags: Values given on the command line
        env_file: Path to .env file (default: .env)

    Returns:
        Merged configuration dictionary

    Raises:
        ConfigError: If the config file is unusable
        ParseError: If the config file cannot be parsed
    """
    merged = load_env_defaults(env_file)

    if config_path:
        file_values = load_from_file(config_path)
        merged.update(file_values)

    overridden = []
    for key, value in (flags or {}).items():
        if value is None:
            continue
        if key in merged and merged[key] != value:
            overridden.append(key)
        merged[key] = value

    if overridden:
        logger.info(f"Command-line flags override config values: {', '.join(sorted(overridden))}")
    return merged
