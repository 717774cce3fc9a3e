"""Brute-force reference implementations and deterministic generators.

Everything here is for tests and small-scale verification: dense-matrix
algorithms that are independent of the CSR fast paths, plus random graph
and cover generators on the pinned PCG64 bit stream so fixtures reproduce
across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cover import CommunityCover
from .graph import Graph
from .metrics import RNG_ALGORITHM  # noqa: F401  (re-exported for provenance)

UNREACHABLE = -1
MAX_ORACLE_NODES = 1000


@dataclass
class OracleReport:
    """Reference values computed from the dense adjacency matrix."""

    distance_matrix: np.ndarray  # int32, UNREACHABLE sentinel off-component
    triangle_count: int
    local_clustering: np.ndarray  # NaN where degree < 2
    transitivity: float | None
    assortativity: float | None
    diameter: int
    mean_path: float | None


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def dense_adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.node_count, g.node_count), dtype=np.float64)
    for v in range(g.node_count):
        a[v, g.neighbors(v)] = 1.0
    return a


def naive_metrics(g: Graph) -> OracleReport:
    """Floyd-Warshall distances, triangles by triple products, clustering
    and assortativity straight from the definitions."""
    n = g.node_count
    if n > MAX_ORACLE_NODES:
        raise ValueError(f"oracle guard: {n} nodes exceeds {MAX_ORACLE_NODES}")
    a = dense_adjacency(g)

    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    dist[a > 0] = 1.0
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)

    # per-node triangle membership from the cube of the adjacency matrix
    paths2 = a @ a
    tri_per_node = (paths2 * a).sum(axis=1) / 2.0
    triangles = int(round(tri_per_node.sum() / 3.0))

    deg = a.sum(axis=1)
    pairs = deg * (deg - 1) / 2.0
    local = np.full(n, np.nan)
    eligible = deg >= 2
    local[eligible] = tri_per_node[eligible] / pairs[eligible]
    wedges = pairs.sum()
    transitivity = float(tri_per_node.sum() / wedges) if wedges > 0 else None

    assort = None
    us, vs = np.nonzero(a)
    if us.size:
        x, y = deg[us], deg[vs]
        if x.var() > 0:
            assort = float(np.corrcoef(x, y)[0, 1])

    finite = np.isfinite(dist)
    off_diag = finite & ~np.eye(n, dtype=bool)
    if off_diag.any():
        mean_path = float(dist[off_diag].mean())
        diameter = int(dist[off_diag].max())
    else:
        mean_path = None
        diameter = 0
    int_dist = np.where(finite, dist, UNREACHABLE).astype(np.int32)
    return OracleReport(int_dist, triangles, local, transitivity, assort,
                        diameter, mean_path)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p), deterministic for a fixed seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if n > 5000:
        raise ValueError("random_graph is dense sampling; keep n <= 5000")
    rng = _rng(seed)
    if n < 2:
        return Graph.from_edges((np.empty(0, np.int64), np.empty(0, np.int64)),
                                node_count=n)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges((iu[keep], ju[keep]), node_count=n)


def random_cover(n: int, communities: int, min_size: int, max_size: int,
                 seed: int) -> CommunityCover:
    """Random cover: community sizes uniform in [min_size, max_size],
    members sampled without replacement within each community."""
    if communities < 1:
        raise ValueError("need at least one community")
    if not 1 <= min_size <= max_size:
        raise ValueError("need 1 <= min_size <= max_size")
    if max_size > n:
        raise ValueError(f"community size {max_size} exceeds {n} nodes")
    rng = _rng(seed)
    sizes = rng.integers(min_size, max_size + 1, size=communities)
    members = [np.sort(rng.choice(n, size=int(s), replace=False))
               for s in sizes]
    return CommunityCover.from_member_lists(members, n)


def naive_overlap_edges(cover: CommunityCover
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All-pairs set intersection over communities: (i, j, size) with
    i < j and size >= 1, sorted.  Quadratic; for verification only."""
    k = cover.community_count
    if k > 200:
        raise ValueError("all-pairs oracle guard: keep covers <= 200")
    sets = [set(cover.members(c).tolist()) for c in range(k)]
    out_i, out_j, out_w = [], [], []
    for i in range(k):
        for j in range(i + 1, k):
            w = len(sets[i] & sets[j])
            if w:
                out_i.append(i)
                out_j.append(j)
                out_w.append(w)
    return (np.array(out_i, dtype=np.int64),
            np.array(out_j, dtype=np.int64),
            np.array(out_w, dtype=np.int64))
