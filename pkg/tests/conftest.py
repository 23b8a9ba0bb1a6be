import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rel_err(got, want):
    want = complex(want)
    scale = max(abs(want), 1e-300)
    return abs(complex(got) - want) / scale
