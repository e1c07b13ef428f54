import numpy as np
import pytest

from mrtrend import table1_trend

TABLE1 = [
    (0, 7.3728, 0.0), (2, 0.0786, 0.6331), (4, 0.1664, 2.0853), (9, 0.1576, -2.1316),
    (10, 0.2074, -1.4149), (12, 0.1376, -1.0862), (13, 0.1380, 2.6551),
    (15, 0.1626, 2.0512), (16, 0.0964, -1.8092), (20, 0.1756, -1.8587),
]


@pytest.fixture
def trend1():
    """Table-1 harmonics with unit period."""
    return table1_trend(1.0)


@pytest.fixture
def trend16():
    """Table-1 harmonics spanning the 4000 x 1/250 window (the experiment setup)."""
    return table1_trend(16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
