import numpy as np
import pytest

from ssguard.classes import Grid3
from ssguard.constants import CONFIG
from ssguard.io import make_fixture


@pytest.fixture(autouse=True)
def _reset_tolerance_scale():
    CONFIG.tol_scale = 1.0
    yield
    CONFIG.tol_scale = 1.0


@pytest.fixture(params=[0.3, 0.4, 0.5, 0.6], ids=lambda g: f"gamma={g}")
def trivial(request):
    return make_fixture("trivial", gamma=request.param)


@pytest.fixture(scope="session")
def gaussian_blob():
    return make_fixture("gaussian-blob")


@pytest.fixture(scope="session")
def gaussian_column():
    return make_fixture("gaussian-column")


@pytest.fixture(scope="session")
def gaussian_ring():
    return make_fixture("gaussian-ring")


@pytest.fixture(scope="session")
def manufactured_swirl():
    return make_fixture("manufactured-swirl", gamma=0.4, a=0.1, kappa=1.0)


@pytest.fixture(scope="session")
def axisym_strain():
    return make_fixture("linear-strain", symmetry="axisym", gamma=0.4, a=0.1, b=0.1)


@pytest.fixture(scope="session")
def off_axis_zero():
    return make_fixture("off-axis-zero", gamma=0.45)


@pytest.fixture
def small_grid():
    return Grid3.centered(17, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
