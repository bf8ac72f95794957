import numpy as np
import pytest

SEED = 20240820


def random_unit(d, n, seed=SEED):
    g = np.random.default_rng(seed).standard_normal((n, d + 1))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
