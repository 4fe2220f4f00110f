import pytest

from dlfvault.field import gen_params


@pytest.fixture(scope="session")
def params64():
    return gen_params(64, seed=1001)


@pytest.fixture(scope="session")
def params128():
    return gen_params(128, seed=1002)


@pytest.fixture(scope="session")
def params256():
    return gen_params(256, seed=1003)


@pytest.fixture(scope="session")
def params32():
    return gen_params(32, seed=1004)
