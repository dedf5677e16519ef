import math

import pytest
from hypothesis import HealthCheck, settings

from bolza.model import bolza
from bolza.spectrum import enumerate_classes

settings.register_profile(
    "repo", derandomize=True, max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

SQRT2 = math.sqrt(2)
L1 = 2 * math.acosh(1 + SQRT2)
L2 = 2 * math.acosh(3 + 2 * SQRT2)


@pytest.fixture(scope="session")
def model():
    return bolza()


@pytest.fixture(scope="session")
def high_model():
    return bolza("high")


@pytest.fixture(scope="session")
def classes8(model):
    return enumerate_classes(8.0, model)
