import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "hessval", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hessval")


@pytest.fixture
def rot2():
    th = np.pi / 6
    return np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
