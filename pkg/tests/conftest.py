import random

import pytest
from hypothesis import settings, strategies as st

from zol.graphs import PatternGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# lines printed by the acceptance suite at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_graph(rng: random.Random, n: int, p: float | None = None) -> PatternGraph:
    p = rng.random() if p is None else p
    return PatternGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8) -> PatternGraph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return PatternGraph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261016)
