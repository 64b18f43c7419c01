import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _fixed_numpy_printoptions():
    with np.printoptions(precision=10, suppress=False):
        yield
