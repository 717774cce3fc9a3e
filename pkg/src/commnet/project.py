"""Projection of a community cover onto the community-overlap network.

Nodes of the projection are communities; two communities are linked when
they share at least ``threshold`` member nodes.  Intersection sizes are
kept in a sidecar so the downstream graph stays unweighted.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .cover import CommunityCover, IntegerHistogram, overlap_pair_counts
from .graph import Graph, _build_csr, connected_components


@dataclass(eq=False)
class ProjectedGraph:
    """Community-overlap network with per-edge intersection sizes.

    ``edge_weights`` is aligned with ``graph.edge_arrays()`` (canonical
    lexicographic edge order).  ``max_membership`` flags pathological
    covers: a node in k communities contributes C(k,2) pair increments.
    """

    graph: Graph
    edge_weights: np.ndarray
    threshold: int
    max_membership: int

    def weight_of(self, i: int, j: int) -> int:
        """Intersection size for edge (i, j); 0 when not linked."""
        if i == j:
            return 0
        lo, hi = (i, j) if i < j else (j, i)
        u, v = self.graph.edge_arrays()
        n = self.graph.node_count
        keys = u.astype(np.int64) * n + v
        pos = np.searchsorted(keys, lo * n + hi)
        if pos < keys.size and keys[pos] == lo * n + hi:
            return int(self.edge_weights[pos])
        return 0


@dataclass
class ComponentCensus:
    """Node and link shares by component class of the projection."""

    giant_node_fraction: float
    small_component_node_fraction: float
    isolated_node_fraction: float
    giant_link_fraction: float
    giant_nodes: int
    giant_links: int
    component_count: int

    def to_dict(self) -> dict:
        return asdict(self)


def project(cover: CommunityCover, threshold: int = 1) -> ProjectedGraph:
    """Build the overlap network over all communities of the cover.

    Communities overlapping nothing stay as isolated nodes.  The result
    is deterministic: edges come out in canonical sorted order.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    i, j, w = overlap_pair_counts(cover)
    keep = w >= threshold
    i, j, w = i[keep], j[keep], w[keep]
    k = cover.community_count
    indptr, indices = _build_csr(i, j, k)
    g = Graph(indptr, indices)
    weights = np.ascontiguousarray(w, dtype=np.int64)
    weights.setflags(write=False)
    mcounts = cover.membership_counts
    max_m = int(mcounts.max()) if mcounts.size else 0
    return ProjectedGraph(g, weights, threshold, max_m)


def component_census(pg: ProjectedGraph) -> ComponentCensus:
    """Fractions of nodes in the giant / small / singleton components and
    the giant component's share of links.

    A giant of size one counts as isolated (all-singleton projections
    report isolated fraction 1.0).
    """
    g = pg.graph
    labeling = connected_components(g)
    sizes = labeling.component_sizes
    n = g.node_count
    giant = labeling.giant_id
    giant_size = int(sizes[giant])
    giant_nodes = giant_size if giant_size >= 2 else 0
    singleton_nodes = int(sizes[sizes == 1].sum())
    small_nodes = n - giant_nodes - singleton_nodes

    u, _ = g.edge_arrays()
    m = g.edge_count
    giant_links = int(np.count_nonzero(labeling.component_of[u] == giant)) \
        if giant_size >= 2 else 0
    return ComponentCensus(
        giant_node_fraction=giant_nodes / n,
        small_component_node_fraction=small_nodes / n,
        isolated_node_fraction=singleton_nodes / n,
        giant_link_fraction=(giant_links / m) if m else 0.0,
        giant_nodes=giant_nodes,
        giant_links=giant_links,
        component_count=labeling.component_count,
    )


def community_degree_histogram(pg: ProjectedGraph) -> IntegerHistogram:
    """Degree histogram of the projection, zero-degree communities included."""
    return IntegerHistogram.from_values(pg.graph.degrees)
