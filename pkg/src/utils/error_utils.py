"""
Error Utility Functions
====================

This module contains the exception hierarchy of the project and the helpers
that standardize how foreign exceptions are logged and converted.

Classes:
    AppError: Base class for all custom exceptions.
    ConfigError: Exception raised for configuration errors.
    AlgebraError: Exception raised by the polynomial / Groebner engine.
    DegreeCapExceeded: A potentially divergent loop hit the configured degree cap.
    ConstructionError: A generic construction could not be validated.
    CodimFailure: A determinantal ideal missed its expected codimension.
    InstanceParseError: An instance file could not be parsed.
    SchemaValidationError: A report does not match the shipped JSON schema.

Functions:
    handle_exception: Decorator to handle exceptions in functions.
    ExceptionContext: Context manager for handling exceptions.

Example:
    >>> from src.utils.error_utils import handle_exception, AlgebraError
    >>> @handle_exception(custom_mapping={ValueError: AlgebraError})
    >>> def reduce_matrix():
    ...     # Function that might raise exceptions
    ...     pass
"""

# Standard library imports
import functools
import logging
import traceback
from typing import Type, Callable, TypeVar, Optional


# Base exception class
class AppError(Exception):
    """Base exception for all application errors"""

    pass


# Configuration-related exceptions
class ConfigError(AppError):
    """Base error related to configuration"""

    pass


class ConfigMissingError(ConfigError):
    """Error when required configuration is missing"""

    pass


# Engine exceptions
class AlgebraError(AppError):
    """Base error for polynomial, module and Groebner computations"""

    pass


class DegreeCapExceeded(AlgebraError):
    """Error when a computation needs degrees above the configured cap"""

    def __init__(self, degree: int, cap: int, operation: str = "computation"):
        self.degree = degree
        self.cap = cap
        super().__init__(
            f"{operation} reached degree {degree}, above the cap of {cap}"
        )


class HomogeneityError(AlgebraError):
    """Error when a matrix is not a degree-0 map between the given free modules"""

    pass


class ParameterError(AlgebraError):
    """Error when parameters fall outside the admissible range"""

    pass


# Construction exceptions
class ConstructionError(AppError):
    """Base error for instance construction and validation"""

    pass


class CodimFailure(ConstructionError):
    """Error when a determinantal ideal does not have the expected codimension"""

    def __init__(self, actual: int, expected: int, what: str = "I(phi)"):
        self.actual = actual
        self.expected = expected
        super().__init__(
            f"codim {what} = {actual}, expected {expected}"
        )


class DegreeInfeasible(ConstructionError):
    """Error when no degree-0 map with the requested twists exists"""

    pass


class NoSectionFound(ConstructionError):
    """Error when no admissible section exists at the requested twist"""

    pass


class ResampleExhausted(ConstructionError):
    """Error when every resampling attempt failed validation"""

    pass


# Instance file exceptions
class InstanceError(AppError):
    """Base error for instance files"""

    pass


class InstanceParseError(InstanceError):
    """Error when an instance file cannot be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class InstanceValidationError(InstanceError):
    """Error when a parsed instance violates one of its invariants"""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        suffix = f": {detail}" if detail else ""
        super().__init__(f"invariant '{invariant}' violated{suffix}")


# Report exceptions
class ReportError(AppError):
    """Base error for report generation"""

    pass


class SchemaValidationError(ReportError):
    """Error when a report does not validate against its schema"""

    pass


# Type variable for function return
T = TypeVar("T")


def handle_exception(
    func: Callable[..., T] = None,
    custom_mapping: dict[Type[Exception], Type[AppError]] = None,
) -> Callable[..., T]:
    """
    Decorator to standardize exception handling.

    Args:
        func: The function to decorate
        custom_mapping: Optional dictionary mapping exceptions to custom app exceptions

    Returns:
        Decorated function with standardized exception handling
    """

    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs) -> T:
            try:
                return fn(*args, **kwargs)
            except AppError as e:
                # Already a custom exception, just log and re-raise
                logging.error(f"{e.__class__.__name__}: {str(e)}")
                raise
            except Exception as e:
                if custom_mapping and type(e) in custom_mapping:
                    error_cls = custom_mapping[type(e)]
                    logging.error(f"Mapped error in {fn.__name__}: {str(e)}")
                    logging.debug(f"Exception details: {traceback.format_exc()}")
                    raise error_cls(str(e)) from e
                elif custom_mapping and Exception in custom_mapping:
                    error_cls = custom_mapping[Exception]
                    logging.error(f"Mapped error in {fn.__name__}: {str(e)}")
                    logging.debug(f"Exception details: {traceback.format_exc()}")
                    raise error_cls(str(e)) from e
                else:
                    logging.error(f"Unexpected error in {fn.__name__}: {str(e)}")
                    logging.debug(f"Exception details: {traceback.format_exc()}")
                    raise AppError(f"Unexpected error: {str(e)}") from e

        return wrapper

    if func is None:
        return decorator
    return decorator(func)


class ExceptionContext:
    """
    Context manager for standardized exception handling.

    Example:
        with ExceptionContext("Parsing [phi] block", error_cls=InstanceError):
            # code that might raise exceptions
    """

    def __init__(self, operation_name: str, error_cls: Type[AppError] = AppError):
        self.operation_name = operation_name
        self.error_cls = error_cls

    def __enter__(self):
        return self

    def __exit__(self, _exc_type, exc_val, _exc_tb):
        if exc_val is None:
            return False

        if isinstance(exc_val, AppError):
            logging.error(
                f"{exc_val.__class__.__name__} in {self.operation_name}: {str(exc_val)}"
            )
            return False

        logging.error(f"Error in {self.operation_name}: {str(exc_val)}")
        logging.debug(f"Exception details: {traceback.format_exc()}")
        raise self.error_cls(
            f"Error in {self.operation_name}: {str(exc_val)}"
        ) from exc_val

