"""Shared fixtures: canonical small graphs and covers."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from commnet.cover import CommunityCover
from commnet.graph import Graph, validate

settings.register_profile(
    "suite",
    deadline=None,  # first calls hit JIT compilation
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def build_graph(edges, node_count=None) -> Graph:
    return Graph.from_edges(list(edges), node_count=node_count)


def path_graph(k: int) -> Graph:
    return build_graph([(i, i + 1) for i in range(k - 1)], node_count=k)


def cycle_graph(k: int) -> Graph:
    return build_graph([(i, (i + 1) % k) for i in range(k)], node_count=k)


def complete_graph(k: int) -> Graph:
    return build_graph([(i, j) for i in range(k) for j in range(i + 1, k)],
                       node_count=k)


def star_graph(k: int) -> Graph:
    """Hub 0 joined to k leaves."""
    return build_graph([(0, i) for i in range(1, k + 1)], node_count=k + 1)


def barbell_graph() -> Graph:
    """Two triangles joined by one bridge edge (nodes 2-3)."""
    return build_graph([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5),
                        (2, 3)])


@pytest.fixture
def p4() -> Graph:
    return path_graph(4)


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def toy_cover() -> CommunityCover:
    """A={1,2,3}, B={2,3,4}, C={5} over six nodes 0..5."""
    return CommunityCover.from_member_lists(
        [[1, 2, 3], [2, 3, 4], [5]], node_count=6)


def assert_graph_valid(g: Graph) -> None:
    validate(g)
    assert g.indptr.dtype == np.int64
    assert g.indices.dtype == np.int32
