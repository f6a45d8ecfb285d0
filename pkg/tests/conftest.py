import functools

import pytest

from optquad import build_with_parts, solve_full


@functools.lru_cache(maxsize=None)
def _parts(m, N):
    return build_with_parts(m, N)


@functools.lru_cache(maxsize=None)
def _oracle(m, N):
    return solve_full(m, N)


@pytest.fixture(scope="session")
def parts():
    """(m, N) -> (formula, roots, solution), memoized across the session."""
    return _parts


@pytest.fixture(scope="session")
def oracle():
    return _oracle
