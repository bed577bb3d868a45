import pytest

from gcdstats.arith import build_table


@pytest.fixture(scope="session")
def table_100():
    return build_table(100, (1, 2))


@pytest.fixture(scope="session")
def table_1000():
    return build_table(1000, (1, 2, 3))


@pytest.fixture(scope="session")
def table_10k():
    return build_table(10_000, (1, 2))
