import itertools

import pytest

from measured_greedy import CutFunction, UniformMatroid

# Filled by the acceptance module; printed once at the end of the session.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


def brute_cut(edges, S):
    """Plain-Python cut value, independent of the matrix implementation."""
    return sum(w for u, v, w in edges if (u in S) != (v in S))


def subsets(n):
    for k in range(n + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(n), k))


@pytest.fixture
def triangle():
    return CutFunction(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def uniform1():
    return UniformMatroid(3, 1)
