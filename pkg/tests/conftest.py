import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from h2ad.array import reference_config  # noqa: E402
from h2ad.signal import SimulationConfig  # noqa: E402


@pytest.fixture
def reference_array():
    return reference_config()


@pytest.fixture
def sim41():
    return SimulationConfig(true_angle=math.radians(41), snapshot_count=100, snr_db=0.0)
