import math

import numpy as np
import pytest

from phasequant.grid import GridSpec
from phasequant.signals import Gaussian, Hermite


@pytest.fixture(scope="session")
def grid():
    return GridSpec(256, -16.0, 16.0, 1.0)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(128, -12.0, 12.0, 1.0)


@pytest.fixture(scope="session")
def square_grid():
    return GridSpec.square(256, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_gaussian(rng, hbar=1.0):
    s = math.sqrt(hbar)
    a = complex(rng.uniform(0.6, 1.6), rng.uniform(-0.3, 0.3))
    return Gaussian.normalized(a, s * rng.uniform(-1.5, 1.5), s * rng.uniform(-1.0, 1.0), hbar)


def hermite_probes(grid, count=20):
    """Hermite functions h_0..h_{count-1} as columns (computed by recurrence)."""
    y = grid.x / math.sqrt(grid.hbar)
    cols = [np.pi ** -0.25 * np.exp(-0.5 * y ** 2)]
    cols.append(math.sqrt(2.0) * y * cols[0])
    for k in range(2, count):
        cols.append(math.sqrt(2.0 / k) * y * cols[k - 1] - math.sqrt((k - 1) / k) * cols[k - 2])
    return np.stack(cols[:count], axis=1).astype(np.complex128) * grid.hbar ** -0.25
