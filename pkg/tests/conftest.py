import random

import pytest

from reflkit.gen import TermGen


@pytest.fixture
def gen():
    return TermGen(random.Random(1234))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
