import os
import sys
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from pdrecon.graphcore import Graph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def graphs(draw, min_n=1, max_n=8, no_isolated=False):
    n = draw(st.integers(max(min_n, 2) if no_isolated else min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, c in zip(pairs, chosen) if c]
    g = Graph.from_edges(n, edges)
    if no_isolated and g.isolated:
        # hang each isolated vertex on its successor (or vertex 0)
        extra = [(v, (v + 1) % n) for v in range(n) if g.isolated >> v & 1]
        edges = sorted({tuple(sorted(e)) for e in edges + extra})
        g = Graph.from_edges(n, edges)
    return g


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def nb_of():
    from oracles import adjacency

    return lambda g: adjacency(g.n, g.edges())
