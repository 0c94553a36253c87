"""Structured logging configuration for absim."""

from __future__ import annotations

import json
import logging
import os
import sys
from typing import IO, Any

ROOT_LOGGER = "absim"


def setup_logging(
    level: str | None = None,
    json_output: bool = False,
    stream: IO[str] | None = None,
) -> logging.Logger:
    """Configure and return the root logger for the application.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR). Defaults to INFO,
               or DEBUG if ABSIM_DEBUG env var is set.
        json_output: If True, output logs in JSON format.
        stream: Destination stream; stderr by default so stdout stays free
                for JSON reports.

    Returns:
        Configured root logger for the application.
    """
    if level is None:
        level = "DEBUG" if os.environ.get("ABSIM_DEBUG") else "INFO"

    log_level = getattr(logging, level.upper(), logging.INFO)

    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(log_level)
    logger.handlers.clear()

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(log_level)

    formatter: logging.Formatter
    if json_output:
        formatter = JsonFormatter()
    else:
        formatter = logging.Formatter(
            fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger


class JsonFormatter(logging.Formatter):
    """One JSON object per record; `extra={"context": {...}}` fields are merged in."""

    def format(self, record: logging.LogRecord) -> str:
        log_data: dict[str, Any] = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        context = getattr(record, "context", None)
        if isinstance(context, dict):
            log_data.update(context)

        return json.dumps(log_data, default=str)


def get_logger(name: str) -> logging.Logger:
    """Child logger `absim.<name>` (name is typically __name__)."""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
