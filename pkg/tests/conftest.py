import pytest

from gammabench import fixtures
from gammabench.gamma import GammaModel


CORPUS = ["bigon", "c4", "k4", "multi3", "octahedron", "torus_3x3", "torus_4x4", "torus_4x6"]


@pytest.fixture(scope="session")
def corpus():
    return {name: fixtures.load(name) for name in CORPUS + ["torus_3x3x3"]}


@pytest.fixture(scope="session")
def bigon():
    return fixtures.bigon()


@pytest.fixture(scope="session")
def c4():
    return fixtures.cycle4()


@pytest.fixture(scope="session")
def k4():
    return fixtures.k4()


@pytest.fixture(scope="session")
def multi3():
    return fixtures.multi3()


@pytest.fixture(scope="session")
def octa():
    return fixtures.octahedron()


@pytest.fixture(scope="session")
def bigon_model(bigon):
    return GammaModel(bigon)


@pytest.fixture(scope="session")
def c4_model(c4):
    return GammaModel(c4)
