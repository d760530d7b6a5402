import numpy as np
import pytest

from calindex import BoundaryData


@pytest.fixture
def data_a() -> BoundaryData:
    """The recurring worked example: mu0=1, lines (0.3, 1), (-0.3, -1), k0=1."""
    return BoundaryData.make(1.0, [(0.3, 1), (-0.3, -1)], 1)


@pytest.fixture
def data_trivial() -> BoundaryData:
    """Trivial eigenbundles: all Chern numbers zero."""
    return BoundaryData.make(1.0, [(0.5, 0), (-0.5, 0)], 1)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
