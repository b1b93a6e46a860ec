import math

import pytest

from degenspinor.checks import DEFAULTS
from degenspinor.generators import make_generators

PHI = math.pi / 6


@pytest.fixture
def defaults():
    return DEFAULTS


@pytest.fixture
def gen():
    """The default massive family: linear (0.3, -0.2, 0.7), h = sin(t)."""
    return DEFAULTS.family()


@pytest.fixture
def zero_gen():
    return make_generators()


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_record(pytestconfig):
    """Callable storing one summary line per acceptance criterion."""
    lines = pytestconfig.stash.setdefault(ACCEPTANCE, {})

    def record(number, line):
        lines[number] = line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
    passed = sum(line.startswith("[PASS]") for line in lines.values())
    terminalreporter.write_line(f"{passed}/{len(lines)} criteria passed")
