"""
Workbench configuration.

Defaults, overridden by a YAML file (``ADDLAB_CONFIG_PATH``), overridden by
environment variables; CLI flags override all of these.
"""

import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .error_handler import ConfigurationError
from .logging import VALID_LEVELS, get_logger

logger = get_logger("config")


@dataclass(frozen=True)
class OracleConfig:
    """Multi-start settings shared by every numerical oracle."""

    restarts: int = 64
    max_iterations: int = 500
    tolerance: float = 1e-10  # relative change stop
    seed: int = 0
    workers: int = 1

    def validate(self) -> None:
        if self.restarts < 1:
            raise ConfigurationError(f"restarts must be >= 1, got: {self.restarts}", config_key="restarts")
        if self.max_iterations < 1:
            raise ConfigurationError(
                f"max_iterations must be >= 1, got: {self.max_iterations}", config_key="max_iterations"
            )
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be > 0, got: {self.tolerance}", config_key="tolerance")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be non-negative, got: {self.seed}", config_key="seed")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got: {self.workers}", config_key="workers")

    def with_overrides(self, **overrides: Any) -> "OracleConfig":
        """Return a copy with the non-None overrides applied."""
        updated = replace(self, **{k: v for k, v in overrides.items() if v is not None})
        updated.validate()
        return updated


@dataclass
class LoggingConfig:
    level: str = "INFO"
    json_format: bool = False


@dataclass
class WorkbenchConfig:
    """Configuration for the whole workbench."""

    oracle: OracleConfig = field(default_factory=OracleConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output_dir: Path = field(default_factory=lambda: Path("output"))

    @classmethod
    def from_env(cls, base: "WorkbenchConfig | None" = None) -> "WorkbenchConfig":
        """Load configuration from environment variables on top of ``base``."""

        base = base or cls()
        oracle = OracleConfig(
            restarts=_get_int_env("ADDLAB_RESTARTS", base.oracle.restarts),
            max_iterations=_get_int_env("ADDLAB_MAX_ITERS", base.oracle.max_iterations),
            tolerance=_get_float_env("ADDLAB_TOL", base.oracle.tolerance),
            seed=_get_int_env("ADDLAB_SEED", base.oracle.seed),
            workers=_get_int_env("ADDLAB_WORKERS", base.oracle.workers),
        )
        logging_config = LoggingConfig(
            level=os.getenv("ADDLAB_LOG_LEVEL", base.logging.level).upper(),
            json_format=_get_bool_env("ADDLAB_LOG_JSON", base.logging.json_format),
        )
        config = cls(
            oracle=oracle,
            logging=logging_config,
            output_dir=Path(os.getenv("ADDLAB_OUTPUT_DIR", str(base.output_dir))),
        )
        config.validate()
        return config

    @classmethod
    def from_yaml(cls, yaml_path: str | Path) -> "WorkbenchConfig":
        """Create config from a YAML file with ``oracle`` and ``logging`` sections."""
        try:
            with open(yaml_path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"Cannot load configuration from {yaml_path}: {e}") from e

        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration root in {yaml_path} must be a mapping")

        oracle_data = data.get("oracle", {}) or {}
        logging_data = data.get("logging", {}) or {}
        unknown = set(oracle_data) - set(asdict(OracleConfig()))
        if unknown:
            raise ConfigurationError(f"Unknown oracle settings: {sorted(unknown)}", config_key="oracle")

        try:
            oracle = OracleConfig(**oracle_data)
        except TypeError as e:
            raise ConfigurationError(f"Invalid oracle settings: {e}", config_key="oracle") from e

        config = cls(
            oracle=oracle,
            logging=LoggingConfig(
                level=str(logging_data.get("level", "INFO")).upper(),
                json_format=bool(logging_data.get("json_format", False)),
            ),
            output_dir=Path(data.get("output_dir", "output")),
        )
        config.validate()
        return config

    def validate(self) -> None:
        """Validate configuration settings."""
        self.oracle.validate()
        if self.logging.level not in VALID_LEVELS:
            raise ConfigurationError(f"Invalid log level: {self.logging.level}", config_key="logging.level")
        logger.debug("Configuration validation completed", seed=self.oracle.seed, restarts=self.oracle.restarts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "oracle": asdict(self.oracle),
            "logging": asdict(self.logging),
            "output_dir": str(self.output_dir),
        }


_global_config: WorkbenchConfig | None = None


def get_config() -> WorkbenchConfig:
    """Get the current configuration instance."""
    global _global_config
    if _global_config is None:
        yaml_path = os.getenv("ADDLAB_CONFIG_PATH")
        base = WorkbenchConfig.from_yaml(yaml_path) if yaml_path else None
        _global_config = WorkbenchConfig.from_env(base)
    return _global_config


def reload_config() -> WorkbenchConfig:
    """Drop the cached configuration and load it again."""
    global _global_config
    _global_config = None
    return get_config()


def _get_bool_env(key: str, default: bool) -> bool:
    value = os.getenv(key)
    if value is None:
        return default
    return value.lower() in ("true", "1", "yes", "on")


def _get_float_env(key: str, default: float) -> float:
    value = os.getenv(key)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError as e:
        raise ConfigurationError(f"{key} must be a number, got: {value!r}", config_key=key) from e


def _get_int_env(key: str, default: int) -> int:
    value = os.getenv(key)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError as e:
        raise ConfigurationError(f"{key} must be an integer, got: {value!r}", config_key=key) from e
