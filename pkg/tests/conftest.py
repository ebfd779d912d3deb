import pytest
from hypothesis import strategies as st

from walkprofile import Graph, generate_er_gnp


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 12):
    """Arbitrary small simple graphs."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Graph(n)
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph.from_edges(n, edges)


def er_population(count: int, n_range: tuple[int, int], seed0: int = 0):
    """Deterministic mixed-density population for bulk checks."""
    lo, hi = n_range
    out = []
    for i in range(count):
        n = lo + (i * 7919) % (hi - lo + 1)
        p = ((i * 31) % 97 + 2) / 100
        out.append(generate_er_gnp(n, p, seed0 + i))
    return out
