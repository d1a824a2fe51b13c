"""Shared fixtures for the test suite."""

import pytest

from dynamics.initial_states import gaussian_state, random_bandlimited_state
from field_grid.grid import make_grid


@pytest.fixture
def grid2d():
    return make_grid(2, 64, 8.0)


@pytest.fixture
def grid3d():
    return make_grid(3, 32, 8.0)


@pytest.fixture
def gaussian2d(grid2d):
    """Off-center Gaussian with momentum, well inside the box."""
    return gaussian_state(grid2d, width=1.0, center=(0.7, -0.4), momentum=(0.5, 0.3))


@pytest.fixture
def random2d(grid2d):
    return random_bandlimited_state(grid2d, seed=7, cutoff=0.25, envelope=1.0)
