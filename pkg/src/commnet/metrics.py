"""Macroscopic topological measures: clustering, distances, diameter,
degree correlation.

Everything operates on the read-only CSR graph; BFS-heavy computations
can fan out over a thread pool (the BFS kernel releases the GIL) and
merge per-thread integer accumulators, so results are identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from weakref import WeakKeyDictionary

import numpy as np

from . import _kernels
from .graph import Graph, _build_csr, connected_components

RNG_ALGORITHM = "pcg64"  # numpy PCG64 bit stream, pinned for reproducible seeds


class MetricError(ValueError):
    """A measure is undefined for this graph (no wedges, regular, ...)."""


# --------------------------------------------------------------------------
# clustering

_TRIANGLE_CACHE: "WeakKeyDictionary[Graph, np.ndarray]" = WeakKeyDictionary()


def triangle_counts_per_node(g: Graph) -> np.ndarray:
    """Triangles incident to each node, each triangle counted at all three
    corners.  Cached per graph instance."""
    cached = _TRIANGLE_CACHE.get(g)
    if cached is not None:
        return cached
    deg = g.degrees
    n = g.node_count
    order = np.lexsort((np.arange(n), deg))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    tri = _kernels.triangle_counts(g.indptr, g.indices, rank)
    tri.setflags(write=False)
    _TRIANGLE_CACHE[g] = tri
    return tri


def triangle_count(g: Graph) -> int:
    """Total number of triangles."""
    return int(triangle_counts_per_node(g).sum()) // 3


def local_clustering(g: Graph, v: int) -> float | None:
    """Fraction of v's neighbor pairs that are linked; None for degree < 2."""
    nbrs = g.neighbors(v)
    d = nbrs.size
    if d < 2:
        return None
    links = 0
    for a in nbrs.tolist():
        links += np.intersect1d(g.neighbors(a), nbrs,
                                assume_unique=True).size
    return links / (d * (d - 1))  # each neighbor link seen twice


def _clustering_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(degrees, per-node clustering with NaN for degree<2, eligible mask)."""
    deg = g.degrees.astype(np.int64)
    tri = triangle_counts_per_node(g)
    eligible = deg >= 2
    c = np.full(g.node_count, np.nan)
    with np.errstate(invalid="ignore", divide="ignore"):
        pairs = deg * (deg - 1) / 2.0
        c[eligible] = tri[eligible] / pairs[eligible]
    return deg, c, eligible


def average_local_clustering(g: Graph,
                             count_low_degree_as_zero: bool = False) -> float:
    """Mean local clustering coefficient.

    By default nodes of degree < 2 (where the coefficient is undefined)
    are excluded; with ``count_low_degree_as_zero`` they enter as 0,
    which is the other convention in common use.
    """
    deg, c, eligible = _clustering_arrays(g)
    if count_low_degree_as_zero:
        if g.node_count == 0:
            raise MetricError("empty graph")
        return float(np.nansum(c) / g.node_count)
    if not eligible.any():
        raise MetricError("no node of degree >= 2")
    return float(np.nanmean(c[eligible]))


def transitivity(g: Graph) -> float:
    """Global clustering: 3 * triangles / wedges."""
    deg = g.degrees.astype(np.int64)
    wedges = int((deg * (deg - 1) // 2).sum())
    if wedges == 0:
        raise MetricError("no wedge in graph, transitivity undefined")
    return float(triangle_counts_per_node(g).sum() / wedges)


@dataclass
class ClusteringByDegree:
    """Mean local clustering per degree class (degree >= 2 only)."""

    per_degree: dict[int, float]
    eligible_node_count: dict[int, int]

    def value_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ks = sorted(self.per_degree)
        return (np.array(ks, dtype=np.float64),
                np.array([self.per_degree[k] for k in ks]))

    def write_csv(self, dest) -> None:
        lines = ["degree,avg_clustering,node_count\n"]
        for k in sorted(self.per_degree):
            lines.append(
                f"{k},{self.per_degree[k]!r},{self.eligible_node_count[k]}\n")
        if hasattr(dest, "write"):
            dest.writelines(lines)
        else:
            from pathlib import Path
            Path(dest).write_text("".join(lines))


def clustering_by_degree(g: Graph) -> ClusteringByDegree:
    deg, c, eligible = _clustering_arrays(g)
    if not eligible.any():
        return ClusteringByDegree({}, {})
    dsub = deg[eligible]
    csub = c[eligible]
    sums = np.bincount(dsub, weights=csub)
    counts = np.bincount(dsub)
    ks = np.flatnonzero(counts)
    return ClusteringByDegree(
        per_degree={int(k): float(sums[k] / counts[k]) for k in ks},
        eligible_node_count={int(k): int(counts[k]) for k in ks},
    )


# --------------------------------------------------------------------------
# distances

@dataclass
class HopDistribution:
    """Counts of unordered connected node pairs by exact distance.

    ``cumulative`` holds g(d): the fraction of connected pairs at distance
    <= d.  In sampled mode counts are unbiased estimates scaled from BFS
    over ``sources`` uniformly drawn distinct source nodes.
    """

    pair_counts: dict[int, float]
    cumulative: dict[int, float]
    mean_distance: float
    max_distance_observed: int
    mode: str  # "exact" | "sampled"
    sources: int | None = None
    seed: int | None = None

    @property
    def total_pairs(self) -> float:
        return sum(self.pair_counts.values())

    def sample_std(self) -> float:
        """Standard deviation of the distance multiset."""
        d = np.array(sorted(self.pair_counts), dtype=np.float64)
        w = np.array([self.pair_counts[int(k)] for k in d])
        mean = float((d * w).sum() / w.sum())
        return float(math.sqrt(((d - mean) ** 2 * w).sum() / w.sum()))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pair_counts"] = {str(k): v for k, v in
                              sorted(self.pair_counts.items())}
        out["cumulative"] = {str(k): v for k, v in
                             sorted(self.cumulative.items())}
        out["sample_std"] = self.sample_std()
        return out

    def write_csv(self, dest) -> None:
        lines = ["distance,pair_count,cdf\n"]
        for d in sorted(self.pair_counts):
            lines.append(
                f"{d},{self.pair_counts[d]!r},{self.cumulative[d]!r}\n")
        if hasattr(dest, "write"):
            dest.writelines(lines)
        else:
            from pathlib import Path
            Path(dest).write_text("".join(lines))


def _bfs_level_totals(g: Graph, sources: np.ndarray, threads: int) -> np.ndarray:
    """Sum of per-level reached-node counts over BFS from each source."""
    n = g.node_count
    indptr, indices = g.indptr, g.indices

    def run(chunk: np.ndarray) -> np.ndarray:
        dist = np.empty(n, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        acc = np.zeros(n + 1, dtype=np.int64)
        for s in chunk.tolist():
            dist.fill(-1)
            _kernels.bfs_levels(indptr, indices, s, dist, queue, acc)
        return acc

    if threads <= 1 or sources.size < 4:
        return run(sources)
    chunks = np.array_split(sources, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(run, [c for c in chunks if c.size]))
    return np.sum(parts, axis=0)


def hop_distribution(g: Graph, *, sources: int | None = None,
                     seed: int | None = None, threads: int = 1
                     ) -> HopDistribution:
    """Distribution of pairwise hop distances.

    Exact mode (``sources=None``) runs BFS from every node and halves the
    ordered-pair counts.  Sampled mode draws ``sources`` distinct nodes
    with the pinned PCG64 generator (``seed`` required) and rescales to
    unbiased pair-count estimates; with ``sources == n`` it reproduces
    exact mode bin for bin.
    """
    n = g.node_count
    if n == 0:
        raise MetricError("empty graph")
    if sources is None:
        src = np.arange(n, dtype=np.int64)
        mode, n_sources, used_seed = "exact", None, None
        scale = 0.5
    else:
        if sources < 1 or sources > n:
            raise ValueError(f"sources must be in [1, {n}], got {sources}")
        if seed is None:
            raise ValueError("sampled mode requires an explicit seed")
        rng = np.random.Generator(np.random.PCG64(seed))
        src = np.sort(rng.choice(n, size=sources, replace=False))
        mode, n_sources, used_seed = "sampled", int(sources), int(seed)
        scale = n / (2.0 * sources)

    totals = _bfs_level_totals(g, src, threads)
    dists = np.flatnonzero(totals)
    if dists.size == 0:
        raise MetricError("no connected pair of distinct nodes")
    counts = totals[dists]
    if mode == "exact":
        # ordered counts are symmetric, so halving stays integral
        pair_counts = {int(d): int(c) // 2 for d, c in zip(dists, counts)}
    else:
        pair_counts = {int(d): float(c) * scale for d, c in zip(dists, counts)}
    total = sum(pair_counts.values())
    cum = 0.0
    cumulative = {}
    for d in sorted(pair_counts):
        cum += pair_counts[d]
        cumulative[d] = cum / total
    mean = sum(d * c for d, c in pair_counts.items()) / total
    return HopDistribution(pair_counts, cumulative, float(mean),
                           int(dists.max()), mode, n_sources, used_seed)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from one source (-1 for unreachable nodes)."""
    n = g.node_count
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    acc = np.zeros(n + 1, dtype=np.int64)
    _kernels.bfs_levels(g.indptr, g.indices, source, dist, queue, acc)
    return dist


def _eccentricity(g: Graph, source: int, dist: np.ndarray,
                  queue: np.ndarray, acc: np.ndarray) -> int:
    dist.fill(-1)
    return int(_kernels.bfs_levels(g.indptr, g.indices, source, dist,
                                   queue, acc))


def _diameter_connected(g: Graph) -> int:
    """Exact diameter via iFUB: double-sweep lower bound, then
    eccentricities level by level from a midpoint root with the 2(i-1)
    pruning bound."""
    n = g.node_count
    if n == 1:
        return 0
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    acc = np.zeros(n + 1, dtype=np.int64)

    start = int(np.argmax(g.degrees))
    _eccentricity(g, start, dist, queue, acc)
    a = int(np.argmax(dist))
    ecc_a = _eccentricity(g, a, dist, queue, acc)
    dist_a = dist.copy()
    b = int(np.argmax(dist_a))
    lb = ecc_a
    _eccentricity(g, b, dist, queue, acc)
    dist_b = dist
    # midpoint of some shortest a-b path
    on_path = (dist_a + dist_b == lb) & (dist_a == lb // 2)
    root = int(np.flatnonzero(on_path)[0])

    dist_r = np.empty(n, dtype=np.int32)
    dist_r.fill(-1)
    ecc_r = int(_kernels.bfs_levels(g.indptr, g.indices, root, dist_r,
                                    queue, acc))
    lb = max(lb, ecc_r)
    i = ecc_r
    # Before fringe i is processed, every unprocessed pair lies within
    # depth i of the root, so its distance is at most 2i; once lb reaches
    # that bound the remaining levels cannot improve it.
    while i > 0 and lb < 2 * i:
        for u in np.flatnonzero(dist_r == i).tolist():
            ecc_u = _eccentricity(g, u, dist, queue, acc)
            if ecc_u > lb:
                lb = ecc_u
        i -= 1
    return lb


def diameter(g: Graph) -> int:
    """Exact diameter; on a disconnected graph, the maximum over
    components."""
    if g.node_count == 0:
        raise MetricError("empty graph")
    labeling = connected_components(g)
    if labeling.component_count == 1:
        return _diameter_connected(g)
    u, v = g.edge_arrays()
    best = 0
    for comp in np.flatnonzero(labeling.component_sizes >= 2):
        keep = labeling.component_of == comp
        new_of_old = np.cumsum(keep) - 1
        inside = keep[u]
        indptr, indices = _build_csr(new_of_old[u[inside]],
                                     new_of_old[v[inside]],
                                     int(keep.sum()))
        best = max(best, _diameter_connected(Graph(indptr, indices)))
    return best


# --------------------------------------------------------------------------
# degree correlation

def assortativity(g: Graph) -> float:
    """Pearson correlation of degrees over the 2m ordered edge-endpoint
    pairs (Newman's r)."""
    if g.edge_count == 0:
        raise MetricError("no edges")
    deg = g.degrees.astype(np.float64)
    x = np.repeat(deg, g.degrees)
    y = deg[g.indices]
    mx = x.mean()
    vx = ((x - mx) ** 2).mean()
    if vx == 0.0:
        raise MetricError("degree variance over endpoints is zero "
                          "(regular graph), assortativity undefined")
    cov = ((x - mx) * (y - mx)).mean()
    return float(cov / vx)


# --------------------------------------------------------------------------
# summary

@dataclass
class GlobalSummary:
    """Scalar topology profile of one graph.

    Quantities that are undefined on the given graph (assortativity with
    zero degree variance, clustering without any wedge) are None.
    """

    average_shortest_path: float
    diameter: int
    average_local_clustering: float | None
    average_local_clustering_all_nodes: float
    transitivity: float | None
    assortativity: float | None
    min_degree: int
    max_degree: int
    mean_degree: float
    connected: bool

    def to_dict(self) -> dict:
        return asdict(self)


def global_summary(g: Graph, hop: HopDistribution) -> GlobalSummary:
    """Assemble the scalar profile; ``hop`` supplies the mean distance so
    callers can choose exact or sampled mode once."""
    deg = g.degrees

    def _maybe(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MetricError:
            return None

    labeling = connected_components(g)
    return GlobalSummary(
        average_shortest_path=hop.mean_distance,
        diameter=diameter(g),
        average_local_clustering=_maybe(average_local_clustering, g),
        average_local_clustering_all_nodes=average_local_clustering(
            g, count_low_degree_as_zero=True),
        transitivity=_maybe(transitivity, g),
        assortativity=_maybe(assortativity, g),
        min_degree=int(deg.min()),
        max_degree=int(deg.max()),
        mean_degree=float(deg.mean()),
        connected=labeling.component_count == 1,
    )
