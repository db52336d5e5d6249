from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arena.domain import Domain, Issue, LinearAdditiveProfile  # noqa: E402


@pytest.fixture
def opposed_pair():
    """One issue, two values; each side's best value is worthless to the other."""
    domain = Domain((Issue("x", ("a", "b")),))
    pa = LinearAdditiveProfile(domain, (1.0,), ((1.0, 0.0),))
    pb = LinearAdditiveProfile(domain, (1.0,), ((0.0, 1.0),))
    return domain, pa, pb


# filled by test_acceptance; one line per criterion in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
