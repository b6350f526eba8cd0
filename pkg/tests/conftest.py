import pytest

from magicstar.lattice import enumerate_roots, make_spec


@pytest.fixture(scope="session")
def e8_1():
    return enumerate_roots(make_spec("e8", 1))


@pytest.fixture(scope="session")
def e6_1():
    return enumerate_roots(make_spec("e6", 1))


@pytest.fixture(scope="session")
def e8_2():
    return enumerate_roots(make_spec("e8", 2))
