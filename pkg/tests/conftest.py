import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tourpart.mpt import MptInstance  # noqa: E402


@pytest.fixture
def cycle3():
    return MptInstance.from_arcs(3, 1, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def transitive3():
    return MptInstance.from_arcs(3, 1, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
