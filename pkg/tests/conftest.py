import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ionscatter.species import default_registry


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture
def be(registry):
    return registry["9Be+"]


@pytest.fixture
def ca(registry):
    return registry["43Ca+"]


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
