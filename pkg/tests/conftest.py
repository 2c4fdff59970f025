import itertools
from pathlib import Path

import pytest

from deephub.temporal_graph import Snapshot

DATA = Path(__file__).parent / "data"
HOSPITAL = DATA / "ia-hospital.edges"

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def clique(nodes, index=1):
    return Snapshot.from_edges(index, itertools.combinations(nodes, 2))


@pytest.fixture
def triangle():
    return clique([0, 1, 2])


@pytest.fixture
def star():
    # centre 0, leaves 1..4
    return Snapshot.from_edges(1, [(0, i) for i in range(1, 5)])


@pytest.fixture
def path3():
    # a=0 - b=1 - c=2
    return Snapshot.from_edges(1, [(0, 1), (1, 2)])


@pytest.fixture
def two_cliques():
    left = list(range(10))
    right = list(range(10, 20))
    pairs = list(itertools.combinations(left, 2)) + list(itertools.combinations(right, 2)) + [(9, 10)]
    return Snapshot.from_edges(1, pairs), left, right


def star_of_degrees(degrees):
    """Snapshot where node 0's neighbours 1..k have the given degrees.

    Each neighbour gets ``d - 1`` private leaves on top of its link to 0.
    """
    pairs = []
    nxt = len(degrees) + 1
    for i, d in enumerate(degrees, start=1):
        pairs.append((0, i))
        for _ in range(d - 1):
            pairs.append((i, nxt))
            nxt += 1
    return Snapshot.from_edges(1, pairs)
