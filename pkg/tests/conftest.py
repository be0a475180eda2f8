import functools

import pytest

from hurwitz.oracle import hurwitz_poly


@functools.lru_cache(maxsize=None)
def _poly(n, g):
    return hurwitz_poly(n, g)


@pytest.fixture(scope="session")
def oracle_poly():
    """Memoized brute-force P_{g,n}, called as oracle_poly(n, g)."""
    return _poly
