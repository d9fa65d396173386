import numpy as np
import pytest

from wavelab.core.utils import make_rng
from wavelab.euler import GasParameters
from wavelab.fields import StateVector, random_states

SEED = 1234


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(SEED)


@pytest.fixture
def states(rng):
    return random_states(rng, 100)


@pytest.fixture
def unit_state() -> StateVector:
    return StateVector(1.0, 1.0, 0.0)


@pytest.fixture(params=[1.4, 2.0, 3.0], ids=lambda k: f"kappa={k}")
def gas(request) -> GasParameters:
    return GasParameters(kappa=request.param)
