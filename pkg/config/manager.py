"""
Experiment manager: resolves the configuration of one command run, owns
its output directory and writes the reproduction manifest.
"""

import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Optional, Type

from pydantic import ValidationError

from config.loader import auto_load_configuration
from config.validator import get_validation_error_message, validate_config_complete
from models.experiment import (
    DiagnoseConfig,
    EstimateConfig,
    ExperimentConfig,
    ProbitRegenConfig,
    SimulateConfig,
)
from utils.errors import ConfigError
from utils.io import write_json
from utils.logger import logger

CONFIG_MODELS: Dict[str, Type[ExperimentConfig]] = {
    'simulate': SimulateConfig,
    'estimate': EstimateConfig,
    'probit-regen': ProbitRegenConfig,
    'diagnose': DiagnoseConfig,
}

VERSIONED_PACKAGES = ('numpy', 'scipy', 'pandas', 'joblib', 'pydantic')


def package_versions() -> Dict[str, str]:
    """Versions of Python and the numerical packages, for manifests."""
    versions = {'python': platform.python_version()}
    for name in VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = 'unknown'
    return versions


class ExperimentManager:
    """
    Holds the resolved configuration of a single command run.

    Unlike a long-lived server, each CLI invocation builds its own manager.
    """

    def __init__(self, command: str):
        if command not in CONFIG_MODELS:
            raise ConfigError(
                f"Unknown command '{command}'. Available commands: {', '.join(CONFIG_MODELS)}"
            )
        self.command = command
        self._config: Optional[ExperimentConfig] = None

    @classmethod
    def from_config(cls, command: str, config: ExperimentConfig) -> 'ExperimentManager':
        """Wrap an already-validated config (used when a command is called directly)."""
        manager = cls(command)
        manager._config = config
        return manager

    @property
    def config(self) -> ExperimentConfig:
        if self._config is None:
            raise RuntimeError('Configuration not loaded. Call load() first.')
        return self._config

    def load(
        self,
        config_path: Optional[str] = None,
        flags: Optional[Dict[str, Any]] = None,
        env_file: str = '.env'
    ) -> ExperimentConfig:
        """
        Merge defaults, file and flags, check completeness and validate.

        Args:
            config_path: Optional JSON/YAML config file
            flags: Values given on the command line (None means not given)
            env_file: Path to .env file

        Returns:
            Typed configuration model for this command

        Raises:
            ConfigError: If required fields are missing or a value is invalid
            ParseError: If the config file cannot be parsed
        """
        data = auto_load_configuration(config_path, flags, env_file)

        is_valid, missing = validate_config_complete(self.command, data)
        if not is_valid:
            message = get_validation_error_message(self.command, missing)
            logger.error(message)
            raise ConfigError(message)

        model = CONFIG_MODELS[self.command]
        try:
            self._config = model(**data)
        except ValidationError as e:
            logger.error(f"Invalid configuration for '{self.command}': {e}")
            raise ConfigError(f"Invalid configuration for '{self.command}':\n{e}")

        logger.info(f"Configuration resolved for '{self.command}' (seed {self._config.seed})")
        return self._config

    @property
    def output_dir(self) -> Path:
        """Output directory, created on first access."""
        path = Path(self.config.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def output_path(self, name: str) -> Path:
        return self.output_dir / name

    def manifest(self) -> Dict[str, Any]:
        """{command, config, seed, versions, created_at}; created_at is the only wall-clock field."""
        return {
            'command': self.command,
            'config': self.config.model_dump(mode='json'),
            'seed': self.config.seed,
            'versions': package_versions(),
            'created_at': datetime.now(timezone.utc).isoformat(),
        }

    def write_manifest(self) -> Path:
        path = write_json(self.manifest(), self.output_path('manifest.json'))
        logger.info(f"Manifest written: {path}")
        return path
