import numpy as np
import pytest


@pytest.fixture
def rng():
    # Fixed seed: every randomized suite is reproducible
    return np.random.default_rng(20240101)
