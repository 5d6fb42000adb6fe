import numpy as np
import pytest

from rabikzm import Grid, ModelParams, SpinorState


@pytest.fixture
def grid():
    return Grid(half_width=16.0, n_points=256)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def random_state(grid, rng):
    shape = (grid.n_points,)
    up = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    dn = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    envelope = np.exp(-0.25 * grid.x**2)
    return SpinorState(up * envelope, dn * envelope).normalized(grid)


@pytest.fixture
def normal_params():
    return ModelParams(lam=1.0, g_tilde=0.5, Omega=100.0)


@pytest.fixture
def super_x_params():
    return ModelParams(lam=1.0, g_tilde=1.3, Omega=100.0)


@pytest.fixture
def super_p_params():
    return ModelParams(lam=-1.0, g_tilde=1.3, Omega=100.0)
