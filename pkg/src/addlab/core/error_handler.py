"""
Unified error handling for the additivity workbench.

Every failure the library can raise derives from WorkbenchError, which carries a
stable upper-snake code and the process exit code the CLI reports for it.
"""

import logging
import uuid
from datetime import datetime, timezone

UTC = timezone.utc
from typing import Any


class WorkbenchError(Exception):
    """Base exception for workbench errors."""

    def __init__(
        self, message: str, code: str = "WORKBENCH_ERROR", exit_code: int = 2, details: dict[str, Any] | None = None
    ):
        self.message = message
        self.code = code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(message)


class ArgumentError(WorkbenchError, ValueError):
    """An argument violates an operation's precondition (shape, range, count)."""

    def __init__(self, message: str, argument: str | None = None, details: dict[str, Any] | None = None):
        super().__init__(
            message=message,
            code="ARGUMENT_ERROR",
            details={"argument": argument, **(details or {})} if argument else (details or {}),
        )


class DomainError(WorkbenchError, ValueError):
    """A mathematical object is invalid for the operation (zero vector, non-orthonormal basis, ...)."""

    def __init__(self, message: str, details: dict[str, Any] | None = None, code: str = "DOMAIN_ERROR"):
        super().__init__(message=message, code=code, details=details)


class NotInRegionError(DomainError):
    """The requested (p, d) point lies outside the breaking region of a construction."""

    def __init__(self, message: str, p: float, d: int):
        super().__init__(message, details={"p": p, "d": d}, code="NOT_IN_REGION")


class ResourceError(WorkbenchError):
    """A guard on enumeration size or dense-matrix size was exceeded."""

    def __init__(self, message: str, limit: int | None = None, requested: int | None = None):
        details: dict[str, Any] = {}
        if limit is not None:
            details["limit"] = limit
        if requested is not None:
            details["requested"] = requested
        super().__init__(message=message, code="RESOURCE_ERROR", details=details)


class ConfigurationError(WorkbenchError):
    """Exception for configuration-related errors."""

    def __init__(self, message: str, config_key: str | None = None):
        super().__init__(
            message=message,
            code="CONFIGURATION_ERROR",
            details={"config_key": config_key} if config_key else {},
        )


class UsageError(WorkbenchError):
    """A CLI flag combination that the argument parser cannot reject on its own."""

    def __init__(self, message: str, flag: str | None = None):
        super().__init__(message=message, code="USAGE_ERROR", details={"flag": flag} if flag else {})


class ErrorHandler:
    """Turns exceptions into structured error payloads and logs them."""

    def __init__(self, logger_name: str = "addlab.error_handler"):
        self.logger = logging.getLogger(logger_name)

    def create_error_payload(self, error: Exception, context: dict[str, Any] | None = None) -> dict[str, Any]:
        """Create a standardized error payload and the matching exit code."""

        error_id = str(uuid.uuid4())
        timestamp = datetime.now(UTC).isoformat()
        error_type_name = type(error).__name__

        if isinstance(error, WorkbenchError):
            exit_code = error.exit_code
            error_data = {"code": error.code, "message": error.message, "details": error.details}
        else:
            exit_code = 2
            error_data = {
                "code": "INTERNAL_ERROR",
                "message": "An unexpected error occurred",
                "details": {"error_type": error_type_name},
            }

        error_context = {"error_id": error_id, "error_type": error_type_name, "exit_code": exit_code, **(context or {})}
        self.logger.error(
            f"Error {error_id}: {error}", extra=error_context, exc_info=not isinstance(error, WorkbenchError)
        )

        return {"error": {**error_data, "error_id": error_id, "timestamp": timestamp}, "exit_code": exit_code}


_global_error_handler: ErrorHandler | None = None


def get_error_handler() -> ErrorHandler:
    """Get the global error handler instance."""
    global _global_error_handler
    if _global_error_handler is None:
        _global_error_handler = ErrorHandler()
    return _global_error_handler
