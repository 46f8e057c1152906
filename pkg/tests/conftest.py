import pytest

from kzfusion.liealg import sl2


@pytest.fixture(scope="session")
def alg():
    a = sl2()
    a.validate()
    return a
