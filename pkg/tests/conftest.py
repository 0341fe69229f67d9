import numpy as np
import pytest

from tubal_solve import stats
from tubal_solve.algebra import Tensor3


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_tensor(rng):
    def make(n1: int, n2: int, k: int) -> Tensor3:
        return Tensor3(rng.standard_normal((n1, n2, k)))

    return make


@pytest.fixture(autouse=True)
def clean_stats():
    stats.reset_stats()
    yield
    stats.reset_stats()
