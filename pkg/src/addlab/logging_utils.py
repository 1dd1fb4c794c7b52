import logging
import threading
import time
from datetime import datetime, timezone

UTC = timezone.utc
from typing import Any

import orjson

# Attributes every LogRecord carries; anything else arrived through ``extra``.
_RECORD_ATTRS = frozenset(
    {
        "args",
        "asctime",
        "created",
        "exc_info",
        "exc_text",
        "filename",
        "funcName",
        "levelname",
        "levelno",
        "lineno",
        "message",
        "module",
        "msecs",
        "msg",
        "name",
        "pathname",
        "process",
        "processName",
        "relativeCreated",
        "stack_info",
        "taskName",
        "thread",
        "threadName",
    }
)


class JsonFormatter(logging.Formatter):
    """
    Thread-safe JSON formatter for structured logging.

    Structured context passed through ``extra`` (as StandardLogger does) is merged
    into the top-level object; dict messages are merged the same way.
    """

    def __init__(self, include_thread_info: bool = True) -> None:
        super().__init__()
        self.include_thread_info = include_thread_info
        self._lock = threading.Lock()

    def format(self, record: logging.LogRecord) -> str:
        with self._lock:
            return self._format_record(record)

    def _format_record(self, record: logging.LogRecord) -> str:
        log_obj: dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if self.include_thread_info:
            log_obj.update({"thread_id": record.thread, "thread_name": record.threadName, "process_id": record.process})

        for key, value in record.__dict__.items():
            if key not in _RECORD_ATTRS and not key.startswith("_"):
                log_obj[key] = value

        if isinstance(record.msg, dict):
            log_obj.update(record.msg)
        else:
            log_obj["message"] = record.getMessage()

        if record.exc_info:
            log_obj["exception"] = {
                "type": record.exc_info[0].__name__ if record.exc_info[0] else None,
                "message": str(record.exc_info[1]) if record.exc_info[1] else None,
                "traceback": self.formatException(record.exc_info),
            }

        try:
            return orjson.dumps(log_obj, default=str, option=orjson.OPT_SERIALIZE_NUMPY).decode()
        except TypeError as e:
            return self._create_fallback_log(record, str(e))

    def _create_fallback_log(self, record: logging.LogRecord, error: str) -> str:
        fallback = {
            "timestamp": datetime.fromtimestamp(record.created, tz=UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": f"Log formatting error: {error}",
            "original_message": str(record.msg),
            "error_type": "json_serialization_failed",
        }
        return orjson.dumps(fallback, default=str).decode()


def log_command_accept(
    logger: logging.Logger, *, command: str, run_id: str, arguments: dict[str, Any] | None = None
) -> None:
    """
    Log that a CLI command was accepted.

    Args:
        logger: Logger instance
        command: Sub-command name (construct, verify, scan, oracle, census)
        run_id: Unique identifier of this invocation
        arguments: Parsed arguments worth recording
    """
    if not command or not run_id:
        raise ValueError("command and run_id are required")

    log_data: dict[str, Any] = {
        "event_type": "command_accepted",
        "command": command,
        "run_id": run_id,
        "timestamp_ms": int(time.time() * 1000),
    }
    if arguments:
        log_data["arguments"] = arguments

    logger.info(log_data)


def log_progress(
    logger: logging.Logger,
    *,
    command: str,
    run_id: str,
    step: str,
    details: dict[str, Any] | None = None,
    progress_percent: float | None = None,
) -> None:
    """
    Log a progress step of a running command.

    Args:
        logger: Logger instance
        command: Sub-command name
        run_id: Unique identifier of this invocation
        step: Current processing step
        details: Optional step details
        progress_percent: Optional progress percentage (0.0-100.0)
    """
    if not command or not run_id or not step:
        raise ValueError("command, run_id, and step are required")

    if progress_percent is not None and not (0.0 <= progress_percent <= 100.0):
        raise ValueError("progress_percent must be between 0.0 and 100.0")

    log_data: dict[str, Any] = {
        "event_type": "progress_update",
        "command": command,
        "run_id": run_id,
        "step": step,
        "timestamp_ms": int(time.time() * 1000),
    }
    if details:
        log_data["details"] = details
    if progress_percent is not None:
        log_data["progress_percent"] = progress_percent

    logger.info(log_data)


def log_command_result(
    logger: logging.Logger,
    *,
    command: str,
    run_id: str,
    exit_code: int,
    duration_ms: float | None = None,
    metadata: dict[str, Any] | None = None,
) -> None:
    """
    Log command completion.

    Args:
        logger: Logger instance
        command: Sub-command name
        run_id: Unique identifier of this invocation
        exit_code: Process exit code about to be returned
        duration_ms: Execution duration in milliseconds
        metadata: Additional result metadata (verdicts, row counts)
    """
    if not command or not run_id:
        raise ValueError("command and run_id are required")

    if duration_ms is not None and duration_ms < 0:
        raise ValueError("duration_ms cannot be negative")

    log_data: dict[str, Any] = {
        "event_type": "command_completed",
        "command": command,
        "run_id": run_id,
        "exit_code": exit_code,
        "status": "success" if exit_code in (0, 3) else "error",
        "timestamp_ms": int(time.time() * 1000),
    }
    if duration_ms is not None:
        log_data["duration_ms"] = round(duration_ms, 3)
    if metadata:
        log_data["metadata"] = metadata

    logger.info(log_data)
