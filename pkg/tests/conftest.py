import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gausscalc import catalog

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=catalog.names())
def entry(request):
    return catalog.get(request.param)
