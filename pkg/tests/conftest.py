import pytest

from trophodge import fixtures as fx
from trophodge.polyhedral import compactify
from trophodge.steenbrink import build_steenbrink


@pytest.fixture(scope="session")
def fixa():
    return fx.fix_a()


@pytest.fixture(scope="session")
def fixb():
    return fx.fix_b()


@pytest.fixture(scope="session")
def fixc():
    return fx.fix_c()


@pytest.fixture(scope="session")
def fixd():
    return fx.fix_d()


@pytest.fixture(scope="session")
def fixe():
    return fx.fix_e()


@pytest.fixture(scope="session")
def fixf():
    return fx.fix_f()


@pytest.fixture(scope="session")
def u34():
    return fx.u34_fan()


@pytest.fixture(scope="session")
def comp_a(fixa):
    return compactify(fixa)


@pytest.fixture(scope="session")
def comp_b(fixb):
    return compactify(fixb)


@pytest.fixture(scope="session")
def comp_c(fixc):
    return compactify(fixc)


@pytest.fixture(scope="session")
def comp_d(fixd):
    return compactify(fixd)


@pytest.fixture(scope="session")
def comp_e(fixe):
    return compactify(fixe)


@pytest.fixture(scope="session")
def comp_f(fixf):
    return compactify(fixf)


@pytest.fixture(scope="session")
def comp_u34(u34):
    return compactify(u34)


@pytest.fixture(scope="session")
def st_d(comp_d):
    return build_steenbrink(comp_d)


@pytest.fixture(scope="session")
def st_e(comp_e):
    return build_steenbrink(comp_e)


@pytest.fixture(scope="session")
def st_f(comp_f):
    return build_steenbrink(comp_f)


@pytest.fixture(scope="session")
def st_a(comp_a):
    return build_steenbrink(comp_a)


@pytest.fixture(scope="session")
def st_c(comp_c):
    return build_steenbrink(comp_c)
