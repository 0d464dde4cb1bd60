"""
Utilities Module
===============

Project-wide helpers. Submodules are imported directly
(`from src.utils.error_utils import AppError`); this package only makes
sure the project root is importable.

Key Components:
-------------
1. error_utils: AppError hierarchy, handle_exception, ExceptionContext
2. logging_utils: LogContext, with_log_context, setup_structured_logging
3. env_utils: .env loading and BRLOCI_* engine overrides
4. math_utils: characteristic checks, binomials, subsets, contraction signs
5. path_utils: directory creation and input lookup
"""

# Standard library imports
import sys
from pathlib import Path


def _setup_project_path():
    """Add project root to Python path."""
    project_root = Path(__file__).resolve().parent.parent.parent
    if str(project_root) not in sys.path:
        sys.path.insert(0, str(project_root))


_setup_project_path()
