import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from genusforge.graphs import SimpleGraph, TerminalGraph, complete_bipartite, complete_graph, delete_edge  # noqa: E402


@pytest.fixture(autouse=True)
def _isolated_profile_cache(tmp_path, monkeypatch):
    """Keep CLI runs from touching the user's profile cache."""
    monkeypatch.setenv("GENUSFORGE_CACHE", str(tmp_path / "profiles.txt"))


@pytest.fixture
def k5() -> SimpleGraph:
    return complete_graph(5)


@pytest.fixture
def k33() -> SimpleGraph:
    return complete_bipartite(3, 3)


@pytest.fixture
def k33_open() -> TerminalGraph:
    """K3,3 with two nonadjacent terminals (same side)."""
    return TerminalGraph(complete_bipartite(3, 3), (0, 1))


@pytest.fixture
def k5_minus_e() -> TerminalGraph:
    return TerminalGraph(delete_edge(complete_graph(5), (0, 1)), (0, 1))


@pytest.fixture
def k33_minus_e() -> TerminalGraph:
    return TerminalGraph(delete_edge(complete_bipartite(3, 3), (0, 3)), (0, 3))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[tuple[float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
