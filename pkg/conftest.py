"""
Shared pieces for the root-level test modules: the vendored graphs and a
hypothesis strategy for small connected graphs.
"""

from pathlib import Path

import pytest
from hypothesis import strategies as st

from burnkit.graph_core import DistanceOracle, Graph, load_graph

FIXTURES = Path(__file__).parent / "fixtures"

# Benchmarks that are not vendored; tests using them skip when absent.
DATASETS = Path(__file__).parent / "datasets"


def dataset(name: str) -> Path:
    path = DATASETS / name
    if not path.is_file():
        pytest.skip(f"dataset {name} not present under {DATASETS}")
    return path


@st.composite
def connected_graphs(draw, min_n: int = 1, max_n: int = 10, extra_edges: int = 8) -> Graph:
    """A random spanning tree plus a few random chords."""
    n = draw(st.integers(min_n, max_n))
    edges = [(v, draw(st.integers(0, v - 1))) for v in range(1, n)]
    if n >= 2:
        chords = draw(st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=extra_edges,
        ))
        edges += [(u, v) for u, v in chords if u != v]
    return Graph.from_edges(n, edges)


@pytest.fixture(scope="session")
def karate() -> Graph:
    return load_graph(str(FIXTURES / "karate.txt"))


@pytest.fixture(scope="session")
def karate_oracle(karate) -> DistanceOracle:
    return DistanceOracle(karate)


@pytest.fixture(scope="session")
def p4() -> Graph:
    return load_graph(str(FIXTURES / "p4.txt"))


@pytest.fixture(scope="session")
def p4_oracle(p4) -> DistanceOracle:
    return DistanceOracle(p4)
