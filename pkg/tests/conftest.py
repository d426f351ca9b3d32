import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from abdirac.grids import make_energy_grid, make_radial_grid


@pytest.fixture(scope="session")
def rgrid():
    """Mid-size composite-Gauss radial grid shared by unit tests."""
    return make_radial_grid(40.0, 2400)


@pytest.fixture(scope="session")
def egrid():
    return make_energy_grid(40.0, 2400)


@pytest.fixture(scope="session")
def rgrid_default():
    """The spec-level default grid (acceptance resolution)."""
    return make_radial_grid(40.0, 4000)


@pytest.fixture(scope="session")
def egrid_default():
    return make_energy_grid(40.0, 4000)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
