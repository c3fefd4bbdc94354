from functools import lru_cache

import pytest

from seqspectra import build_field

# the parameter sets every acceptance criterion is stated over
ACCEPTANCE_FIELDS = [(3, 3, 1), (3, 3, 3), (3, 5, 1), (3, 5, 5), (7, 3, 1), (7, 3, 3), (11, 3, 1), (3, 9, 3)]
SMALL_FIELDS = [(3, 1, 1), (3, 3, 1), (3, 3, 3), (7, 3, 1), (3, 5, 1)]


@lru_cache(maxsize=None)
def field(p, n, k):
    return build_field(p, n, k)


@pytest.fixture(scope="session")
def f331():
    return field(3, 3, 1)


@pytest.fixture(scope="session")
def f333():
    return field(3, 3, 3)


@pytest.fixture(scope="session")
def f731():
    return field(7, 3, 1)


@pytest.fixture(scope="session")
def f351():
    return field(3, 5, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
