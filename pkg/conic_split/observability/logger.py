"""
Structured logging with run context.
"""

import logging
import os
import sys
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pythonjsonlogger.json import JsonFormatter

# Context variables identifying the current run and bench cell
run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
cell_var: ContextVar[Optional[str]] = ContextVar("cell", default=None)

PLAIN_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"


class ContextualJsonFormatter(JsonFormatter):
    """JSON formatter that includes the run context."""

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord,
                   message_dict: Dict[str, Any]) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        log_record["function"] = record.funcName
        log_record["line"] = record.lineno

        run_id = run_id_var.get()
        if run_id:
            log_record["run_id"] = run_id
        cell = cell_var.get()
        if cell:
            log_record["cell"] = cell

        log_record["process"] = os.getpid()
        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)


class ContextFilter(logging.Filter):
    """Adds run_id/cell attributes so plain-text formats can reference them."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = run_id_var.get() or "-"
        record.cell = cell_var.get() or "-"
        return True


def setup_structured_logging(
    log_level: str = "INFO",
    use_json: bool = True,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Set up structured logging.

    Console output goes to stderr so stdout stays free for reports.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        use_json: Whether to use JSON format (False for human-readable)
        log_file: Optional file path for file logging

    Returns:
        Configured root logger
    """
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    if use_json:
        formatter: logging.Formatter = ContextualJsonFormatter("%(timestamp)s %(level)s %(name)s %(message)s")
    else:
        formatter = logging.Formatter(PLAIN_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(ContextFilter())
    root_logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, mode="a", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        file_handler.addFilter(ContextFilter())
        root_logger.addHandler(file_handler)

    # quiet third-party loggers
    logging.getLogger("threadpoolctl").setLevel(logging.WARNING)

    root_logger.debug(
        "Structured logging initialized",
        extra={"log_level": log_level, "use_json": use_json, "log_file": log_file},
    )
    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger with the specified name."""
    return logging.getLogger(name)


def set_run_context(run_id: Optional[str] = None, cell: Optional[str] = None) -> None:
    """Set contextual information for the current run."""
    if run_id:
        run_id_var.set(run_id)
    if cell:
        cell_var.set(cell)


def clear_run_context() -> None:
    """Clear contextual information."""
    run_id_var.set(None)
    cell_var.set(None)
