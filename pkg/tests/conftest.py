import os
import random
import shutil
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.config import get_data_paths  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240229)


@pytest.fixture
def golden_copy(tmp_path):
    """Writable copy of the shipped goldens."""
    target = tmp_path / "goldens"
    shutil.copytree(get_data_paths(ROOT)["goldens"], target)
    return target
