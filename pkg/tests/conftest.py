import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gensym import MetricField

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FLAT = [["1", "0", "0", "0"], [None, "1", "0", "0"], [None, None, "1", "0"], [None, None, None, "1"]]


@pytest.fixture
def flat():
    return MetricField.from_strings(FLAT, label="euclidean")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
