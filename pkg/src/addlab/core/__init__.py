"""
Core utilities shared by the workbench: configuration, errors, logging, validation.
"""

from .config import OracleConfig, WorkbenchConfig, get_config, reload_config
from .error_handler import (
    ArgumentError,
    ConfigurationError,
    DomainError,
    ErrorHandler,
    NotInRegionError,
    ResourceError,
    UsageError,
    WorkbenchError,
    get_error_handler,
)
from .logging import StandardLogger, get_logger, setup_logging
from .validation import ConstructionSpec, Family

__all__ = [
    "ArgumentError",
    "ConfigurationError",
    "ConstructionSpec",
    "DomainError",
    "ErrorHandler",
    "Family",
    "NotInRegionError",
    "OracleConfig",
    "ResourceError",
    "StandardLogger",
    "UsageError",
    "WorkbenchConfig",
    "WorkbenchError",
    "get_config",
    "get_error_handler",
    "get_logger",
    "reload_config",
    "setup_logging",
]
