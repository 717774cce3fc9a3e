"""Edge-list ingestion and the compressed-adjacency graph type.

The graph is an undirected simple graph stored in CSR form: ``indptr`` of
length n+1 and ``indices`` holding both directions of every edge (length
2m), neighbor lists sorted ascending.  Instances are treated as immutable
after construction; the underlying arrays are marked read-only so they can
be shared freely across worker threads.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from . import _kernels


class EdgeListError(ValueError):
    """Malformed or empty edge-list input."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class GraphInvariantError(ValueError):
    """A structural invariant of the CSR representation is violated."""


@dataclass
class LoadSummary:
    """Ingestion bookkeeping emitted alongside a parsed graph."""

    nodes: int
    edges: int
    dropped_duplicates: int
    dropped_self_loops: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(eq=False)
class Graph:
    """Immutable undirected simple graph in compressed adjacency form.

    ``node_labels`` optionally carries the original external identifiers
    (index = internal id).  When absent, internal ids are the identity.
    """

    indptr: np.ndarray
    indices: np.ndarray
    node_labels: np.ndarray | None = None

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if self.node_labels is not None:
            self.node_labels.setflags(write=False)
        self._label_index: dict[int, int] | None = None

    @property
    def node_count(self) -> int:
        return self.indptr.size - 1

    @property
    def edge_count(self) -> int:
        return self.indices.size // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        if not 0 <= v < self.node_count:
            raise IndexError(f"node id {v} out of range")
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical edge list (u < v), lexicographically sorted."""
        u = np.repeat(np.arange(self.node_count, dtype=self.indices.dtype),
                      self.degrees)
        keep = u < self.indices
        return u[keep], self.indices[keep]

    def label_of(self, v: int) -> int:
        if self.node_labels is None:
            return int(v)
        return int(self.node_labels[v])

    def internal_id(self, label: int) -> int:
        """Internal id for an external label; KeyError if unknown."""
        if self.node_labels is None:
            if 0 <= label < self.node_count:
                return int(label)
            raise KeyError(label)
        if self._label_index is None:
            self._label_index = {
                int(lab): i for i, lab in enumerate(self.node_labels)
            }
        return self._label_index[label]

    @classmethod
    def from_edges(cls, edges, node_count: int | None = None,
                   node_labels: np.ndarray | None = None) -> "Graph":
        """Build a graph from an iterable or pair of arrays of node pairs.

        Duplicate edges and self-loops are dropped silently; endpoints are
        internal ids (dense, 0-based).
        """
        if isinstance(edges, tuple) and len(edges) == 2:
            u = np.asarray(edges[0], dtype=np.int64)
            v = np.asarray(edges[1], dtype=np.int64)
        else:
            pairs = np.asarray(list(edges), dtype=np.int64)
            if pairs.size == 0:
                pairs = pairs.reshape(0, 2)
            u, v = pairs[:, 0], pairs[:, 1]
        if node_count is None:
            node_count = int(max(u.max(), v.max())) + 1 if u.size else 0
        u, v, _, _ = _clean_edges(u, v, node_count)
        indptr, indices = _build_csr(u, v, node_count)
        return cls(indptr, indices, node_labels)


def _clean_edges(u: np.ndarray, v: np.ndarray, node_count: int):
    """Drop self-loops and duplicate undirected edges; count the drops.

    Returns canonical (lo, hi) arrays sorted lexicographically.
    """
    loops = u == v
    n_loops = int(loops.sum())
    if n_loops:
        u, v = u[~loops], v[~loops]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    keys = lo * np.int64(node_count) + hi
    uniq = np.unique(keys)
    n_dup = keys.size - uniq.size
    return uniq // node_count, uniq % node_count, n_dup, n_loops


def _build_csr(u: np.ndarray, v: np.ndarray, node_count: int):
    """CSR arrays from a clean canonical edge list."""
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order], dtype=np.int32)
    counts = np.bincount(src, minlength=node_count)
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def parse_edge_list(lines: Iterable[str]) -> tuple[Graph, LoadSummary]:
    """Parse whitespace-separated integer pairs into a graph.

    Lines starting with '#' are comments and blank lines are skipped.
    External ids are remapped to dense 0-based internal ids (ascending
    label order); the labels are retained on the graph.  Duplicate edges
    and self-loops are dropped and counted in the summary.  Nodes that
    appear only in dropped self-loops are not materialized.
    """
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise EdgeListError(
                f"expected two node ids, got {len(parts)} tokens", lineno)
        try:
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
        except ValueError:
            raise EdgeListError(
                f"non-integer node id in {s!r}", lineno) from None
    if not us:
        raise EdgeListError("no edges found in input")

    u_raw = np.asarray(us, dtype=np.int64)
    v_raw = np.asarray(vs, dtype=np.int64)
    loops = u_raw == v_raw
    n_loops = int(loops.sum())
    u_raw, v_raw = u_raw[~loops], v_raw[~loops]
    if u_raw.size == 0:
        raise EdgeListError("no edges left after dropping self-loops")

    labels = np.unique(np.concatenate([u_raw, v_raw]))
    u = np.searchsorted(labels, u_raw)
    v = np.searchsorted(labels, v_raw)
    n = labels.size
    u, v, n_dup, _ = _clean_edges(u, v, n)
    indptr, indices = _build_csr(u, v, n)
    g = Graph(indptr, indices, labels)
    summary = LoadSummary(nodes=n, edges=g.edge_count,
                          dropped_duplicates=n_dup,
                          dropped_self_loops=n_loops)
    return g, summary


def load_edge_list(path) -> tuple[Graph, LoadSummary]:
    """Read an edge-list file (transparently gunzipping ``*.gz``)."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        return parse_edge_list(fh)


def write_edge_list(g: Graph, dest, weights: np.ndarray | None = None) -> None:
    """Serialize the canonical edge list as label pairs, one edge per line.

    ``weights`` (aligned with :meth:`Graph.edge_arrays`) adds a third
    column.  Isolated nodes are not representable in this format.
    """
    u, v = g.edge_arrays()
    if g.node_labels is not None:
        lu = g.node_labels[u]
        lv = g.node_labels[v]
    else:
        lu, lv = u, v

    def _emit(fh: IO[str]):
        if weights is None:
            for a, b in zip(lu.tolist(), lv.tolist()):
                fh.write(f"{a} {b}\n")
        else:
            for a, b, w in zip(lu.tolist(), lv.tolist(), weights.tolist()):
                fh.write(f"{a} {b} {w}\n")

    if hasattr(dest, "write"):
        _emit(dest)
        return
    path = Path(dest)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt") as fh:
        _emit(fh)


@dataclass
class ComponentLabeling:
    """Connected-component assignment with deterministic ids.

    Component ids are ordered by their smallest contained internal node
    id; ``giant_id`` is the largest component (ties to the smallest id).
    """

    component_of: np.ndarray
    component_sizes: np.ndarray
    giant_id: int

    @property
    def component_count(self) -> int:
        return self.component_sizes.size


def connected_components(g: Graph) -> ComponentLabeling:
    if g.node_count == 0:
        raise ValueError("empty graph")
    labels = np.full(g.node_count, -1, dtype=np.int32)
    queue = np.empty(g.node_count, dtype=np.int32)
    n_comp = _kernels.label_components(g.indptr, g.indices, labels, queue)
    sizes = np.bincount(labels, minlength=n_comp)
    return ComponentLabeling(labels, sizes, int(np.argmax(sizes)))


def extract_giant(g: Graph,
                  labeling: ComponentLabeling | None = None
                  ) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the giant component plus the new->old id map.

    External labels, when present, are carried over; otherwise the
    returned map is the only way back to the original ids.
    """
    if labeling is None:
        labeling = connected_components(g)
    keep = labeling.component_of == labeling.giant_id
    old_ids = np.flatnonzero(keep)
    new_of_old = np.cumsum(keep) - 1
    u, v = g.edge_arrays()
    inside = keep[u]
    gu = new_of_old[u[inside]]
    gv = new_of_old[v[inside]]
    indptr, indices = _build_csr(gu, gv, old_ids.size)
    labels = g.node_labels[old_ids] if g.node_labels is not None else None
    return Graph(indptr, indices, labels), old_ids


def density(g: Graph) -> float:
    """Standard undirected density 2m / (n (n-1))."""
    n = g.node_count
    if n < 2:
        raise ValueError("density undefined for fewer than 2 nodes")
    return 2.0 * g.edge_count / (n * (n - 1))


def density_directed_convention(g: Graph) -> float:
    """Secondary density figure m / (n (n-1)), reported for comparison."""
    n = g.node_count
    if n < 2:
        raise ValueError("density undefined for fewer than 2 nodes")
    return g.edge_count / (n * (n - 1))


def validate(g: Graph) -> None:
    """Check all structural invariants; raise GraphInvariantError if broken."""
    n = g.node_count
    if g.indptr[0] != 0 or g.indptr[-1] != g.indices.size:
        raise GraphInvariantError("indptr does not span indices")
    if np.any(np.diff(g.indptr) < 0):
        raise GraphInvariantError("indptr not monotone")
    if g.indices.size and (g.indices.min() < 0 or g.indices.max() >= n):
        raise GraphInvariantError("neighbor id out of range")
    for v in range(n):
        nbrs = g.neighbors(v)
        if nbrs.size:
            if np.any(np.diff(nbrs) <= 0):
                raise GraphInvariantError(
                    f"neighbors of {v} not strictly ascending")
            if np.any(nbrs == v):
                raise GraphInvariantError(f"self-loop at {v}")
    u = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    fwd = np.sort(u * n + g.indices)
    rev = np.sort(g.indices.astype(np.int64) * n + u)
    if not np.array_equal(fwd, rev):
        raise GraphInvariantError("adjacency not symmetric")
    if g.indices.size != 2 * g.edge_count:
        raise GraphInvariantError("degree sum != 2m")
    if g.node_labels is not None and g.node_labels.size != n:
        raise GraphInvariantError("label array size mismatch")


def graphs_equal(a: Graph, b: Graph) -> bool:
    """Structural equality: same CSR arrays and same labels."""
    if a.node_count != b.node_count:
        return False
    if not (np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)):
        return False
    la = a.node_labels if a.node_labels is not None else np.arange(a.node_count)
    lb = b.node_labels if b.node_labels is not None else np.arange(b.node_count)
    return np.array_equal(la, lb)
