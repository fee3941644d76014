import pytest

from xbn import builtin_asia


@pytest.fixture(scope="session")
def asia():
    return builtin_asia()
