import numpy as np
import pytest

from treejacobi.graphs import FiniteGraph, JacobiParams, from_edge_list

Q3_EDGES = [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
            (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7)]

PETERSEN_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                  (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                  (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)]


def _named(pairs):
    return from_edge_list([(f"v{u}", f"v{v}") for u, v in pairs])


@pytest.fixture(scope="session")
def q3():
    """Cube graph Q3 with unit parameters (3-regular, bipartite)."""
    return _named(Q3_EDGES)


@pytest.fixture(scope="session")
def petersen():
    """Petersen graph with unit parameters (3-regular, odd girth 5)."""
    return _named(PETERSEN_EDGES)


@pytest.fixture(scope="session")
def k4():
    """Complete graph on 4 vertices with unit parameters."""
    from treejacobi.graphs import complete_graph
    return complete_graph(4)


def random_params(graph: FiniteGraph, rng: np.random.Generator,
                  a_spread: float = 0.5, b_spread: float = 0.5) -> JacobiParams:
    """Positive random weights around 1 and potentials around 0."""
    a = {eid: 1.0 + rng.uniform(0.0, a_spread) for eid, _, _ in graph.edges}
    b = {v: rng.uniform(-b_spread, b_spread) for v in graph.vertices}
    return JacobiParams(a=a, b=b)
