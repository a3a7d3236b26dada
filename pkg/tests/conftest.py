import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from twotime.circuit import default_signature
from twotime.interp import default_interp

settings.register_profile(
    "twotime", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("twotime")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def sig():
    return default_signature()


@pytest.fixture(scope="session")
def gi():
    return default_interp()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
