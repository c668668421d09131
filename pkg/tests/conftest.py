import pytest

from conemoser import fixtures, weights


@pytest.fixture(scope="session")
def spec_x1():
    return fixtures.weight_x1()


@pytest.fixture(scope="session")
def spec_x1x2():
    return fixtures.weight_x1x2()


@pytest.fixture(scope="session")
def consts_x1(spec_x1):
    return weights.compute_constants(spec_x1)


@pytest.fixture(scope="session")
def consts_x1x2(spec_x1x2):
    return weights.compute_constants(spec_x1x2)
