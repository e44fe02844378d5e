import pytest

from geoformal.invariant import aloff_wallach, flag_su3, su4_su2
from geoformal.ring import build_table, builtin_presentation


@pytest.fixture(scope="session")
def aw11():
    return aloff_wallach(1, 1)


@pytest.fixture(scope="session")
def flag():
    return flag_su3()


@pytest.fixture(scope="session")
def sphere_product():
    # SU(4)/SU(2): the expensive space; built once per session
    return su4_su2()


@pytest.fixture(scope="session")
def ex1_table():
    return build_table(builtin_presentation("eschenburg-ex1"))


@pytest.fixture(scope="session")
def ex2_table():
    return build_table(builtin_presentation("eschenburg-ex2"))
