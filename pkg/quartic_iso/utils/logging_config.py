"""Centralized logging configuration for quartic-iso."""

import logging
import os
import sys
import time
from typing import Any

# Structured fields rendered inside the bracket, in this order
_FIELD_LABELS: tuple[tuple[str, str], ...] = (
    ("n", "n"),
    ("m", "m"),
    ("d", "d"),
    ("t", "t"),
    ("stage", "stage"),
    ("workers", "workers"),
    ("chunk", "chunk"),
    ("duration_ms", "duration"),
    ("error_code", "error_code"),
)


class QuarticLogFormatter(logging.Formatter):
    """Formatter that appends the number-theoretic context of a record"""

    def __init__(self, include_fields: bool = True):
        self.include_fields = include_fields
        super().__init__()

    def format(self, record: logging.LogRecord) -> str:
        base_format = "%(asctime)s - %(name)s - %(levelname)s"

        fields = []
        if self.include_fields:
            for attr, label in _FIELD_LABELS:
                if hasattr(record, attr):
                    value = getattr(record, attr)
                    if attr == "duration_ms":
                        fields.append(f"{label}={value}ms")
                    else:
                        fields.append(f"{label}={value}")

        if fields:
            format_str = f"{base_format} [{' | '.join(fields)}] - %(message)s"
        else:
            format_str = f"{base_format} - %(message)s"

        formatter = logging.Formatter(format_str)
        return formatter.format(record)


def setup_logging(
    level: int | None = None,
    log_file: str | None = None,
    force_reconfigure: bool = False,
) -> None:
    """Setup centralized logging configuration.

    Args:
        level: Logging level (defaults to env var QUARTIC_ISO_LOG_LEVEL, else WARNING)
        log_file: Optional log file path (defaults to env var QUARTIC_ISO_LOG_FILE)
        force_reconfigure: Force reconfiguration even if already configured
    """
    root_logger = logging.getLogger()
    if root_logger.handlers and not force_reconfigure:
        return

    if force_reconfigure:
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

    if level is None:
        log_level_str = os.getenv("QUARTIC_ISO_LOG_LEVEL", "WARNING").upper()
        level = getattr(logging, log_level_str, logging.WARNING)

    formatter = QuarticLogFormatter(include_fields=True)

    # Reports go to stdout, so the console handler stays on stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    file_handlers: list[logging.Handler] = []
    log_file = log_file or os.getenv("QUARTIC_ISO_LOG_FILE")
    if log_file:
        try:
            file_handler = logging.FileHandler(log_file, mode="a")
            file_handler.setFormatter(formatter)
            file_handlers.append(file_handler)
        except (OSError, PermissionError):
            # If file logging fails, continue with console only
            pass

    root_logger.setLevel(level)
    root_logger.addHandler(console_handler)
    for handler in file_handlers:
        root_logger.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    """Get a logger with the given name.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    setup_logging()
    return logging.getLogger(name)


def _clean_extra(fields: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in fields.items() if v is not None}


def log_stage(logger: logging.Logger, level: int, message: str, **fields: Any) -> None:
    """Log a computation stage with structured fields (n, d, t, stage, ...)"""
    logger.log(level, message, extra=_clean_extra(fields))


def log_failure(
    logger: logging.Logger,
    message: str,
    error: Exception,
    error_code: int | None = None,
    **fields: Any,
) -> None:
    """Log an error with structured fields

    Args:
        logger: Logger instance
        message: Log message
        error: Exception that occurred
        error_code: Error code from quartic_iso.core.errors.ErrorCodes
        **fields: Additional fields
    """
    extra = _clean_extra(
        {
            "error_code": error_code if error_code is not None else getattr(error, "code", None),
            "error_type": type(error).__name__,
            **fields,
        },
    )
    logger.error(f"{message}: {error!s}", extra=extra)


def log_performance(
    logger: logging.Logger,
    message: str,
    duration_ms: float,
    **fields: Any,
) -> None:
    """Log elapsed time of an operation with structured fields"""
    extra = _clean_extra({"duration_ms": round(duration_ms, 2), **fields})
    logger.info(message, extra=extra)


class PerformanceTimer:
    """Context manager for measuring performance"""

    def __init__(self, logger: logging.Logger, operation: str, **fields: Any):
        self.logger = logger
        self.operation = operation
        self.fields = fields
        self.start_time: float | None = None

    def __enter__(self) -> "PerformanceTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type: object, exc_val: object, exc_tb: object) -> None:
        if self.start_time is not None:
            duration_ms = (time.perf_counter() - self.start_time) * 1000
            log_performance(
                self.logger,
                f"{self.operation} completed",
                duration_ms,
                **self.fields,
            )
