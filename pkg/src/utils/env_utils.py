"""
Environment Utility Functions
===========================

This module loads the optional .env file and overlays environment variables
on top of the engine settings.

Functions:
    load_env_variables: Load environment variables from a .env file.
    engine_settings: ENGINE_SETTINGS with BRLOCI_* overrides applied.

Example:
    >>> from src.utils.env_utils import engine_settings
    >>> settings = engine_settings()
    >>> print(settings["characteristic"])
"""

# Standard library imports
import os
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

# Third-party imports
from dotenv import load_dotenv

# Local imports
from src.config import BATTERY_SETTINGS, ENGINE_SETTINGS
from src.utils.logging_utils import LogContext, with_log_context
from src.utils.error_utils import (
    handle_exception,
    ExceptionContext,
    ConfigMissingError,
    ConfigError,
    ParameterError,
)
from src.utils.math_utils import check_characteristic

# Environment variable -> settings key
ENV_OVERRIDES = {
    "BRLOCI_CHAR": "characteristic",
    "BRLOCI_MAX_DEGREE": "max_degree",
    "BRLOCI_SEED": "default_seed",
    "BRLOCI_RESAMPLE": "resample_attempts",
    "BRLOCI_WORKERS": "workers",
}


@handle_exception(
    custom_mapping={FileNotFoundError: ConfigError, Exception: ConfigError}
)
@with_log_context(module="env_utils", operation="load_env_variables")
def load_env_variables(required_vars: Optional[List[str]] = None) -> Tuple[Path, bool]:
    """
    Load environment variables from .env file.

    Args:
        required_vars: List of required environment variable names

    Returns:
        Tuple of (dotenv_path, success)

    Raises:
        ConfigError: When .env file could not be loaded
        ConfigMissingError: When required variables are missing
    """
    # Project root is 3 levels up from this file
    dotenv_path = Path(__file__).resolve().parent.parent.parent / ".env"

    with LogContext(file_path=str(dotenv_path)):
        with ExceptionContext("Loading .env file", ConfigError):
            success = load_dotenv(dotenv_path=dotenv_path)

        if not success:
            logging.debug(f".env file not found at {dotenv_path}")
            return dotenv_path, False

        logging.info(".env file loaded successfully")

        if required_vars:
            missing_vars = [var for var in required_vars if not os.environ.get(var)]
            if missing_vars:
                missing_vars_str = ", ".join(missing_vars)
                logging.error(f"Missing required environment variables: {missing_vars_str}")
                raise ConfigMissingError(
                    f"Missing required environment variables: {missing_vars_str}"
                )

    return dotenv_path, success


@with_log_context(module="env_utils", operation="engine_settings")
def engine_settings(load_dotenv_file: bool = True) -> Dict[str, int]:
    """
    ENGINE_SETTINGS plus the worker count, overridden by BRLOCI_* variables.

    Raises:
        ConfigError: If a value is not an integer or the characteristic is not prime
    """
    if load_dotenv_file:
        load_env_variables()
    settings = dict(ENGINE_SETTINGS)
    settings["workers"] = BATTERY_SETTINGS["workers"]

    for var, key in ENV_OVERRIDES.items():
        raw = os.environ.get(var)
        if raw is None or raw == "":
            continue
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{var} must be an integer, got {raw!r}")
        if value < 0 or (key in ("max_degree", "resample_attempts", "workers") and value < 1):
            raise ConfigError(f"{var} out of range: {value}")
        settings[key] = value
        logging.debug(f"{var} overrides {key} = {value}")

    try:
        check_characteristic(settings["characteristic"])
    except ParameterError as e:
        raise ConfigError(f"BRLOCI_CHAR: {e}") from e
    return settings


def apply_engine_settings(settings: Dict[str, int]) -> None:
    """Install characteristic, caps and seed into the shared ENGINE_SETTINGS."""
    for key in ENGINE_SETTINGS:
        if key in settings:
            ENGINE_SETTINGS[key] = settings[key]
