import pathlib

import numpy as np
import pytest

from cgl_lab.boundstate import construct_bound_state
from cgl_lab.grid import make_grid

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def periodic_grid():
    return make_grid("periodic", L=60.0, N=2048)


@pytest.fixture(scope="session")
def bs_reference(periodic_grid):
    """The workhorse bound-state: theta=0.3, omega=1, k=0, sigma=2."""
    return construct_bound_state(0.3, 1.0, 0.0, 2.0, periodic_grid)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
