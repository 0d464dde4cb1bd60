"""
Path Utility Functions
===================

Directory creation and lookup of instance and report files.

Functions:
    ensure_dirs_exist: Create directories if they don't exist.
    resolve_input_path: Find a file as given or inside a fallback directory.
    default_report_path: Report path derived from an instance file name.

Typical Usage:
    >>> from src.utils.path_utils import resolve_input_path
    >>> resolve_input_path("cotangent-p3-t1.inst", INSTANCES)
"""

# Standard library imports
import os
from pathlib import Path
from typing import List, Union

PathLike = Union[str, Path]


def ensure_dirs_exist(paths: List[PathLike]) -> None:
    """Ensure that directories exist, creating them if needed.

    Args:
        paths: List of path objects or strings to check/create
    """
    for path in paths:
        os.makedirs(path, exist_ok=True)


def resolve_input_path(path: PathLike, fallback_dir: PathLike) -> Path:
    """
    The path itself when it exists, else the same name inside fallback_dir.

    Raises:
        FileNotFoundError: If neither exists
    """
    candidate = Path(path)
    if candidate.exists():
        return candidate
    inside = Path(fallback_dir) / candidate.name
    if inside.exists():
        return inside
    raise FileNotFoundError(f"{path} not found (also looked in {fallback_dir})")


def default_report_path(instance_path: PathLike, reports_dir: PathLike) -> Path:
    """<reports_dir>/<instance stem>.json"""
    return Path(reports_dir) / f"{Path(instance_path).stem}.json"
