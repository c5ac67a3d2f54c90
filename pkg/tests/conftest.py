import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
REPO = HERE.parent
CORPUS = REPO / "corpus"

# lets test modules import the shared gen/oracle helpers
sys.path.insert(0, str(HERE))


@pytest.fixture
def corpus():
    return CORPUS


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
