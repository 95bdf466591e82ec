import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent / "oracles"))

from zenorate import PhysicalParams, QuadratureConfig  # noqa: E402


@pytest.fixture
def natural():
    """hbar = m = sigma = 1 with the figure friction rate."""
    return PhysicalParams(gamma=0.1)


@pytest.fixture
def cfg():
    return QuadratureConfig()
