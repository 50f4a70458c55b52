import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from atam import corpus  # noqa: E402


@pytest.fixture(scope="session")
def systems():
    """Every corpus system, loaded through the document parser."""
    return {name: corpus.load(name) for name in corpus.systems()}


@pytest.fixture
def line(systems):
    return systems["sys-line.json"]


@pytest.fixture
def sys_l(systems):
    return systems["sys-l.json"]


@pytest.fixture
def coop(systems):
    return systems["sys-coop.json"]


@pytest.fixture
def nondir(systems):
    return systems["sys-nondir.json"]


ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    label = request.node.get_closest_marker("acceptance").args[0]
    ACCEPTANCE[label] = "FAIL"
    yield label
    ACCEPTANCE[label] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{ACCEPTANCE[label]:4}  {label}")
