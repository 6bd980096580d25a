import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from grsc import fixtures  # noqa: E402
from grsc.cancellation import presentation  # noqa: E402
from grsc.geometry import cayley_ball  # noqa: E402


@functools.lru_cache(maxsize=None)
def graph(name):
    return fixtures.load(name)


@functools.lru_cache(maxsize=None)
def certified(name):
    return presentation(graph(name), certified=True)


@functools.lru_cache(maxsize=None)
def ball(name, r):
    return cayley_ball(certified(name), r)


@pytest.fixture
def fix():
    return graph


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
