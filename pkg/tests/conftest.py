import pytest

from assist.graph import DATA, PATTERN, Edge, LabeledGraph
from assist.testkit import load_fixture


def make_graph(nodes, edges=(), role=DATA, **edge_kw):
    """Shorthand: ``nodes`` maps id -> label, ``edges`` is a list of (a, b) pairs."""
    return LabeledGraph(dict(nodes), [Edge(a, b, **edge_kw) for a, b in edges], role=role)


@pytest.fixture
def tri_pattern():
    return make_graph({"A": "A", "B": "B", "C": "C"}, [("A", "B"), ("B", "C"), ("A", "C")], PATTERN)


@pytest.fixture
def tri_data():
    return make_graph({"x1": "A", "x2": "B", "x3": "C"},
                      [("x1", "x2"), ("x2", "x3"), ("x1", "x3")], DATA)


@pytest.fixture(scope="session")
def fixtures():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]
    return get


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
