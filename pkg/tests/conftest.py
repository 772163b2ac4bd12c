import sys
from pathlib import Path

import pytest

from setsketch import HashParams
from setsketch.oracle import InjectedHashTable

sys.path.insert(0, str(Path(__file__).parent))

# keys x=1, y=2, z=4; x^z=5. Keys 3 (x^y) and 6 (y^z) are pinned away from
# buckets 3 and 7 so that only 4 and 6 look pure at the start.
WORKED_EXAMPLE_TABLE = {1: (1, 3, 6), 2: (3, 4, 7), 4: (1, 6, 7), 5: (3, 6, 8), 3: (0, 2, 5), 6: (0, 2, 5)}

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def worked_example():
    params = HashParams(w=8, k=3, n=9, seed=0, r=32)
    return InjectedHashTable(params, WORKED_EXAMPLE_TABLE)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
