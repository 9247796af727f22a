import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tricolor.checks import lifts  # noqa: E402
from tricolor.enumeration import enumerate_slope_class  # noqa: E402
from tricolor.lattice import Dims  # noqa: E402


@pytest.fixture(scope="session")
def lifts_4x4():
    return list(lifts(Dims(2, 4)))


@pytest.fixture(scope="session")
def lifts_ring6():
    return list(lifts(Dims(1, 6)))


@pytest.fixture(scope="session")
def class_6x6_60():
    return list(enumerate_slope_class(Dims(2, 6), (6, 0)))
