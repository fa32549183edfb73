import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# derandomized hypothesis profile: identical runs give identical examples
settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("deterministic")


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
