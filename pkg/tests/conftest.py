import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from randdag.dag import Dag  # noqa: E402

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, passed, detail))
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@st.composite
def dags(draw, min_n=2, max_n=7, connected=False):
    """Random DAG: arcs follow a random vertex order; optionally a spanning tree is forced."""
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(range(1, n + 1)))
    arcs = set()
    for a in range(n):
        for b in range(a + 1, n):
            if draw(st.booleans()):
                arcs.add((order[a], order[b]))
    if connected:
        for b in range(1, n):
            a = draw(st.integers(0, b - 1))
            arcs.add((order[a], order[b]))
    return Dag(n, sorted(arcs))
