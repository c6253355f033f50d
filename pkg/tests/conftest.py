import numpy as np
import pytest

from chaoticlight.core import SpatialGrid, solve_bound_states
from chaoticlight.potentials import SoftCorePotential
from chaoticlight.propagator import PropagationConfig, relax_to_ground


@pytest.fixture(scope="session")
def soft_core():
    return SoftCorePotential()


@pytest.fixture(scope="session")
def small_grid():
    """Cheap grid for unit tests; dx comparable to the production default."""
    return SpatialGrid(x_max=100.0, n_points=1024)


@pytest.fixture(scope="session")
def small_basis(small_grid, soft_core):
    return solve_bound_states(small_grid, soft_core, 5)


@pytest.fixture(scope="session")
def small_ground(small_grid, soft_core):
    return relax_to_ground(small_grid, soft_core, PropagationConfig())


@pytest.fixture(scope="session")
def default_grid():
    return SpatialGrid(x_max=400.0, n_points=4096)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
