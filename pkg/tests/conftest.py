import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config import ENGINE_SETTINGS  # noqa: E402


@pytest.fixture(autouse=True)
def pristine_engine_settings():
    """Undo characteristic, cap and seed overrides a test installs."""
    saved = dict(ENGINE_SETTINGS)
    yield
    ENGINE_SETTINGS.clear()
    ENGINE_SETTINGS.update(saved)
