import numpy as np
import pytest

from elaa.geometry import ArraySpec

WAVELENGTH = 0.1
ANTENNA_AREA = (WAVELENGTH / 4) ** 2  # 6.25e-4 m^2, quarter-wavelength antennas


@pytest.fixture(scope="session")
def reference_spec():
    """The 100x100 quarter-wavelength array used by the figure sweeps."""
    return ArraySpec(10_000, ANTENNA_AREA, WAVELENGTH)


@pytest.fixture(scope="session")
def small_spec():
    return ArraySpec(16, ANTENNA_AREA, WAVELENGTH)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
