import os
import sys

import numpy as np
import pytest

os.environ.setdefault("CUBICLAB_CHECK", "1")
sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density(rng, nmax, rank=3):
    d = nmax + 1
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real
