import pytest

from hurwitz import build_builtin, make_gamma


@pytest.fixture(scope="session")
def s3():
    return build_builtin("sym:3")


@pytest.fixture(scope="session")
def s4():
    return build_builtin("sym:4")


@pytest.fixture(scope="session")
def c4():
    return build_builtin("cyclic:4")


@pytest.fixture(scope="session")
def klein():
    return build_builtin("cyclic:2xcyclic:2")


@pytest.fixture(scope="session")
def d4():
    return build_builtin("dihedral:4")


@pytest.fixture(scope="session")
def q8():
    return build_builtin("quaternion:8")


@pytest.fixture(scope="session")
def s3_transpositions(s3):
    return make_gamma(s3, [s3.index_of("(12)")])


@pytest.fixture(scope="session")
def s3_all(s3):
    return make_gamma(s3, "all-nontrivial")


def el(G, name):
    return G.index_of(name)
