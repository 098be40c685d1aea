import random

import pytest

from lightsqec.code import build_triangular_code

_EXAMPLE_H_ROWS = ["1001011", "0101101", "0010111"]


@pytest.fixture(scope="session")
def example_h_rows():
    """The canonical 7-qubit check matrix, one '0'/'1' string per row."""
    return list(_EXAMPLE_H_ROWS)


@pytest.fixture(scope="session")
def code3():
    return build_triangular_code(3)


@pytest.fixture(scope="session")
def code5():
    return build_triangular_code(5)


@pytest.fixture(scope="session")
def code7():
    return build_triangular_code(7)


@pytest.fixture()
def rng():
    return random.Random(0xC0DE)
