import numpy as np
import pytest

from alblab.integrals import QuadratureConfig


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
