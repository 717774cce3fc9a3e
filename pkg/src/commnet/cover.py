"""Ground-truth community covers and node-level overlap quantities.

A cover maps communities to member nodes and, inverted, nodes to the
communities containing them.  Both directions are kept as CSR-style
arrays so the pairwise-overlap join stays near-linear in the number of
membership incidences.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Graph


class CoverParseError(ValueError):
    """Malformed community file (unknown node id, no communities, ...)."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass
class IntegerHistogram:
    """Counts of an integer-valued quantity.

    ``bins`` maps value -> count with every count positive.
    """

    bins: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    @classmethod
    def from_values(cls, values) -> "IntegerHistogram":
        vals, counts = np.unique(np.asarray(values, dtype=np.int64),
                                 return_counts=True)
        return cls({int(v): int(c) for v, c in zip(vals, counts)})

    def value_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(values, counts) sorted ascending by value."""
        items = sorted(self.bins.items())
        vals = np.array([v for v, _ in items], dtype=np.float64)
        counts = np.array([c for _, c in items], dtype=np.float64)
        return vals, counts

    def write_csv(self, dest, value_name: str = "value") -> None:
        """Two-column CSV: value,count."""
        lines = [f"{value_name},count\n"]
        for v, c in sorted(self.bins.items()):
            lines.append(f"{v},{c}\n")
        if hasattr(dest, "write"):
            dest.writelines(lines)
        else:
            Path(dest).write_text("".join(lines))


@dataclass
class CoverSummary:
    """Parse bookkeeping for a community file."""

    communities: int
    total_memberships: int
    duplicate_members_dropped: int
    empty_lines_skipped: int
    uncovered_nodes: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class CommunityCover:
    """Bidirectional node<->community membership map over internal node ids.

    ``member_indptr``/``member_ids`` list each community's members sorted
    ascending; ``node_indptr``/``node_comms`` invert the map (communities
    per node, sorted ascending).
    """

    member_indptr: np.ndarray
    member_ids: np.ndarray
    node_indptr: np.ndarray
    node_comms: np.ndarray
    node_count: int

    @property
    def community_count(self) -> int:
        return self.member_indptr.size - 1

    @property
    def community_sizes(self) -> np.ndarray:
        return np.diff(self.member_indptr)

    @property
    def membership_counts(self) -> np.ndarray:
        """Number of communities per node (0 for uncovered nodes)."""
        return np.diff(self.node_indptr)

    @property
    def uncovered_node_count(self) -> int:
        return int(np.count_nonzero(self.membership_counts == 0))

    def members(self, c: int) -> np.ndarray:
        return self.member_ids[self.member_indptr[c]:self.member_indptr[c + 1]]

    def memberships(self, v: int) -> np.ndarray:
        return self.node_comms[self.node_indptr[v]:self.node_indptr[v + 1]]

    @classmethod
    def from_member_lists(cls, member_lists: Iterable[Iterable[int]],
                          node_count: int) -> "CommunityCover":
        """Build both directions of the map; members deduplicated per
        community, empty communities rejected."""
        arrays = []
        for i, members in enumerate(member_lists):
            arr = np.unique(np.asarray(list(members), dtype=np.int64))
            if arr.size == 0:
                raise ValueError(f"community {i} is empty")
            if arr[0] < 0 or arr[-1] >= node_count:
                raise ValueError(f"community {i} has node id out of range")
            arrays.append(arr)
        if not arrays:
            raise ValueError("cover has no communities")
        sizes = np.array([a.size for a in arrays], dtype=np.int64)
        member_indptr = np.zeros(sizes.size + 1, dtype=np.int64)
        np.cumsum(sizes, out=member_indptr[1:])
        member_ids = np.concatenate(arrays)
        comm_of = np.repeat(np.arange(sizes.size, dtype=np.int64), sizes)
        order = np.lexsort((comm_of, member_ids))
        node_comms = np.ascontiguousarray(comm_of[order], dtype=np.int32)
        per_node = np.bincount(member_ids, minlength=node_count)
        node_indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(per_node, out=node_indptr[1:])
        for a in (member_indptr, member_ids, node_indptr, node_comms):
            a.setflags(write=False)
        return cls(member_indptr, member_ids, node_indptr, node_comms,
                   node_count)


def parse_cover(lines: Iterable[str], g: Graph
                ) -> tuple[CommunityCover, CoverSummary]:
    """Parse one community per line (whitespace-separated external node ids).

    Ids are translated through the graph's label map; an unknown id is an
    error naming the id and line.  Duplicate ids within a line are dropped
    with a count, empty lines skipped with a count.
    """
    member_lists: list[np.ndarray] = []
    n_dup = 0
    n_empty = 0
    for lineno, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s:
            n_empty += 1
            continue
        ids = []
        for tok in s.split():
            try:
                ext = int(tok)
            except ValueError:
                raise CoverParseError(
                    f"non-integer node id {tok!r}", lineno) from None
            try:
                ids.append(g.internal_id(ext))
            except KeyError:
                raise CoverParseError(
                    f"unknown node id {ext}", lineno) from None
        arr = np.unique(np.asarray(ids, dtype=np.int64))
        n_dup += len(ids) - arr.size
        member_lists.append(arr)
    if not member_lists:
        raise CoverParseError("no communities found in input")
    cover = CommunityCover.from_member_lists(member_lists, g.node_count)
    summary = CoverSummary(
        communities=cover.community_count,
        total_memberships=int(cover.member_ids.size),
        duplicate_members_dropped=n_dup,
        empty_lines_skipped=n_empty,
        uncovered_nodes=cover.uncovered_node_count,
    )
    return cover, summary


def load_cover(path, g: Graph) -> tuple[CommunityCover, CoverSummary]:
    """Read a community file (transparently gunzipping ``*.gz``)."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        return parse_cover(fh, g)


def membership_histogram(cover: CommunityCover) -> IntegerHistogram:
    """Histogram of per-node membership counts over covered nodes.

    Nodes in no community are excluded; their count is available as
    :attr:`CommunityCover.uncovered_node_count`.
    """
    m = cover.membership_counts
    return IntegerHistogram.from_values(m[m >= 1])


def community_size_histogram(cover: CommunityCover) -> IntegerHistogram:
    return IntegerHistogram.from_values(cover.community_sizes)


def overlap_size_histogram(cover: CommunityCover) -> IntegerHistogram:
    """Histogram of |C_i ∩ C_j| over unordered community pairs that share
    at least one node."""
    _, _, weights = overlap_pair_counts(cover)
    if weights.size == 0:
        return IntegerHistogram({})
    return IntegerHistogram.from_values(weights)


def overlap_pair_counts(cover: CommunityCover
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Intersection sizes for every overlapping community pair.

    Node-centric join: each node with k memberships contributes its C(k,2)
    membership pairs to a keyed accumulator, so the cost is linear in the
    number of pair incidences rather than quadratic in communities.
    Returns (i, j, count) with i < j, sorted lexicographically.
    """
    mcounts = cover.membership_counts
    K = np.int64(cover.community_count)
    key_chunks: list[np.ndarray] = []
    count_chunks: list[np.ndarray] = []
    # bucket nodes by membership count so pair expansion is pure ndarray work
    for k in np.unique(mcounts):
        if k < 2:
            continue
        nodes = np.flatnonzero(mcounts == k)
        starts = cover.node_indptr[nodes]
        rows = cover.node_comms[starts[:, None] + np.arange(k)[None, :]]
        iu, ju = np.triu_indices(int(k), 1)
        # per-node membership lists are sorted, so a < b holds pairwise
        a = rows[:, iu].astype(np.int64).ravel()
        b = rows[:, ju].astype(np.int64).ravel()
        keys, counts = np.unique(a * K + b, return_counts=True)
        key_chunks.append(keys)
        count_chunks.append(counts)
    if not key_chunks:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    keys = np.concatenate(key_chunks)
    counts = np.concatenate(count_chunks)
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    counts = counts[order]
    boundaries = np.flatnonzero(np.diff(keys)) + 1
    starts = np.concatenate(([0], boundaries))
    merged = np.add.reduceat(counts, starts)
    uniq = keys[starts]
    return uniq // K, uniq % K, merged


def membership_pair_total(cover: CommunityCover) -> int:
    """Sum over nodes of C(m_v, 2); equals the total overlap incidence."""
    m = cover.membership_counts.astype(np.int64)
    return int((m * (m - 1) // 2).sum())
