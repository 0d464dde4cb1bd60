"""
Logging Utility Functions
======================

This module contains utility functions and classes for logging.

The logging context is kept per thread so that battery instances running in
a worker pool each log under their own instance id and stage.

Classes:
    LogContext: Context manager for adding contextual information to logs.
    ContextAwareFormatter: Formatter that injects the current context into records.

Functions:
    setup_logging: Configure the logging system with specified parameters.
    setup_structured_logging: setup_logging with run-id aware defaults.
    with_log_context: Decorator to add logging context to functions.
    current_log_context: Snapshot of the calling thread's context.

Example:
    >>> from src.utils.logging_utils import setup_logging, LogContext
    >>> setup_logging(level=logging.INFO)
    >>> with LogContext(instance="anchor", stage="resolve"):
    ...     logging.info("This log has context")
"""

# Standard library imports
import logging
import os
import threading
import uuid
from pathlib import Path
from typing import Optional
from functools import wraps

_context_store = threading.local()


def current_log_context() -> dict:
    """Return the logging context of the calling thread (empty if unset)."""
    return getattr(_context_store, "context", {})


class LogContext:
    """
    Context manager for adding structured context to logs.

    Contexts nest: the inner context sees every key of the outer one and
    the previous context is restored on exit.

    Example:
        with LogContext(instance="r5t1", stage="hull"):
            logging.info("Computing hull")
    """

    def __init__(self, **kwargs):
        self.extra = kwargs
        self.old_context = None

    def __enter__(self):
        self.old_context = current_log_context()
        _context_store.context = {**self.old_context, **self.extra}
        return self

    def __exit__(self, _exc_type, _exc_val, _exc_tb):
        _context_store.context = self.old_context
        # Exceptions propagate


class ContextAwareFormatter(logging.Formatter):
    """
    Custom formatter that includes context information in log records.

    Context keys become record attributes, and %(context)s renders them as
    key=value pairs.
    """

    def format(self, record):
        context = current_log_context()
        for key, value in context.items():
            if not hasattr(record, key):
                setattr(record, key, value)

        # "instance=cotangent-p3.inst seed=0", run_id is printed on its own
        if not hasattr(record, "context"):
            record.context = " ".join(f"{k}={v}" for k, v in context.items() if k != "run_id")

        # Ensure run_id is always available to avoid formatting errors
        if not hasattr(record, "run_id"):
            setattr(record, "run_id", "-")

        return super().format(record)


def with_log_context(func=None, **context_kwargs):
    """
    Decorator to add context to all log messages within a function.

    Args:
        func: The function to decorate
        **context_kwargs: Context values to add to log messages

    Example:
        @with_log_context(module="groebner")
        def groebner_basis(columns):
            logging.info("Starting Buchberger")  # Will include module="groebner"
    """

    def decorator(f):
        @wraps(f)
        def wrapped(*args, **kwargs):
            with LogContext(**context_kwargs):
                return f(*args, **kwargs)

        return wrapped

    if func is None:
        return decorator
    return decorator(func)


def get_run_id() -> str:
    """Generate a unique run ID for tracing one CLI invocation."""
    return uuid.uuid4().hex[:12]


def clear_log_context():
    """Clear all context values from the calling thread's logging context."""
    if hasattr(_context_store, "context"):
        del _context_store.context


# Logging configuration
def setup_logging(
    log_file_name=None,
    logs_dir=None,
    level=logging.INFO,
    format_string="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    add_run_id=False,
    run_id=None,
):
    """Set up logging configuration.

    Args:
        log_file_name: Name of the log file
        logs_dir: Path to logs directory (optional)
        level: Logging level (default: INFO)
        format_string: Format string for log messages
        add_run_id: Whether to add a run_id to the logging context
        run_id: Custom run ID (if None and add_run_id=True, one will be generated)

    Returns:
        The run id placed in the context, or None
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Clear existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = ContextAwareFormatter(format_string)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file_name:
        try:
            if not logs_dir:
                logs_dir = Path(__file__).resolve().parent.parent.parent / "logs"

            os.makedirs(logs_dir, exist_ok=True)

            log_file_path = Path(logs_dir) / log_file_name
            file_handler = logging.FileHandler(log_file_path)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)

            logging.info(f"Logging to file: {log_file_path}")
        except Exception as e:
            logging.error(f"Failed to setup file logging: {e}")

    _context_store.context = {}

    if add_run_id:
        run_id = run_id or get_run_id()
        # Keep the run id for the rest of the thread's life
        _context_store.context = {"run_id": run_id}
        logging.info("Logging system initialized with run ID")
        return run_id

    logging.info("Logging system initialized")
    return None


def setup_structured_logging(
    log_file: Optional[str] = None,
    logs_dir: Optional[str] = None,
    level: int = logging.INFO,
    format_string: str = "%(asctime)s - %(levelname)s - %(name)s - %(run_id)s - %(message)s [%(context)s]",
    run_id: Optional[str] = None,
):
    """
    Configure structured logging with context awareness and run ID tracking.
    This is a convenience wrapper around setup_logging with structured logging defaults.

    Args:
        log_file: Optional name of log file
        logs_dir: Optional path to logs directory
        level: Logging level
        format_string: Format string for log messages
        run_id: Optional custom run ID (generated if None)
    """
    return setup_logging(
        log_file_name=log_file,
        logs_dir=logs_dir,
        level=level,
        format_string=format_string,
        add_run_id=True,
        run_id=run_id,
    )
