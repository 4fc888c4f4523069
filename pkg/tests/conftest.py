import pytest
from hypothesis import settings

from proplie.catalog import make_dirprod, make_heisenberg, make_semidirect, make_sl

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def catalog():
    return {
        "dirprod": make_dirprod(3, 4),
        "semidirect": make_semidirect(3, 1, 4),
        "heisenberg": make_heisenberg(3, 4),
        "sl2": make_sl(3, 2, 4),
        "sl3": make_sl(3, 3, 4),
    }


@pytest.fixture(scope="session")
def sl2(catalog):
    return catalog["sl2"].algebra


@pytest.fixture(scope="session")
def heis(catalog):
    return catalog["heisenberg"].algebra
