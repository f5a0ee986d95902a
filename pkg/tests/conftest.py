"""
Shared fixtures; puts the repository root on sys.path
"""
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

import pairalg  # noqa: E402


@pytest.fixture
def torus_fiber_pair():
    return pairalg.non_separating(pairalg.T2, False)


@pytest.fixture
def golden_path():
    return os.path.join(ROOT, "data", "golden_table.json")
