# conftest.py

import pytest

from gammaform.grid import Grid
from gammaform.sampling import make_generator


@pytest.fixture
def rng():
    return make_generator(1234)


@pytest.fixture
def grid_8x8():
    return Grid((8, 8))


@pytest.fixture
def grid_1d():
    return Grid((16,))
