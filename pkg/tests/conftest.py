import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import nonrepresentable  # noqa: E402


@pytest.fixture(scope="session")
def brute_nonrep():
    cache = {}

    def get(limit, k):
        if (limit, k) not in cache:
            cache[limit, k] = nonrepresentable(limit, k)
        return cache[limit, k]

    return get


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
