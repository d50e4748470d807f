import numpy as np
import pytest

from core.galois_field import GaloisField
from core.witt_algebra import WittAlgebra


@pytest.fixture(scope="session")
def gf2():
    return GaloisField(2)


@pytest.fixture(scope="session")
def gf3():
    return GaloisField(3)


@pytest.fixture(scope="session")
def gf4():
    return GaloisField(2, 2)


@pytest.fixture(scope="session")
def gf9():
    return GaloisField(3, 2)


@pytest.fixture(scope="session")
def w1_f2(gf2):
    """The non-simple W_1 in characteristic 2."""
    return WittAlgebra(gf2, 1)


@pytest.fixture(scope="session")
def w1_f3(gf3):
    return WittAlgebra(gf3, 1)


@pytest.fixture(scope="session")
def w2_f3(gf3):
    return WittAlgebra(gf3, 2)


@pytest.fixture(scope="session")
def w2_f4(gf4):
    return WittAlgebra(gf4, 2)


@pytest.fixture(scope="session")
def w2_f9(gf9):
    return WittAlgebra(gf9, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
