import numpy as np
import pytest

from pullin.grid import CylinderGrid, PlateField, PlateGrid, sine_mode
from pullin.parameters import Parameters


@pytest.fixture
def params():
    return Parameters(eps=1.0, beta=1.0, tau=0.0, sigma=0.3, lam=1.0)


@pytest.fixture
def plate():
    return PlateGrid(8)


@pytest.fixture
def cylinder(plate):
    return CylinderGrid(plate, 8)


@pytest.fixture
def bump(plate):
    return sine_mode(plate, 1, 1, 0.1)


@pytest.fixture
def random_hinged(plate):
    # Low modes only, so that stencils and spectral evaluations agree closely
    rng = np.random.default_rng(42)
    field = PlateField.zeros(plate)
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            field = field + sine_mode(plate, k, l, 0.02 * rng.standard_normal())
    return field
