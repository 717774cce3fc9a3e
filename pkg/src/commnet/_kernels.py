"""Numba kernels over CSR adjacency: BFS, component labeling, triangle counts.

All kernels are single-threaded and deterministic; the BFS kernel releases
the GIL so callers can fan BFS sources out over a thread pool.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def bfs_levels(indptr, indices, source, dist, queue, level_counts):
    """BFS from ``source``, writing hop distances into ``dist``.

    ``dist`` must be pre-filled with -1 and ``queue`` sized to hold every
    node.  ``level_counts[d]`` is incremented for every node first reached
    at distance d > 0.  Returns the eccentricity of ``source``.
    """
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    ecc = 0
    while head < tail:
        u = queue[head]
        head += 1
        dv = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = dv
                level_counts[dv] += 1
                if dv > ecc:
                    ecc = dv
                queue[tail] = v
                tail += 1
    return ecc


@njit(cache=True)
def label_components(indptr, indices, labels, queue):
    """Flood-fill component labels; ids ordered by smallest member node.

    ``labels`` must be pre-filled with -1.  Returns the component count.
    """
    n = labels.size
    next_label = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = next_label
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if labels[v] < 0:
                    labels[v] = next_label
                    queue[tail] = v
                    tail += 1
        next_label += 1
    return next_label


@njit(cache=True)
def triangle_counts(indptr, indices, rank):
    """Per-node triangle counts via merge intersection on a degree-ordered
    orientation.

    ``rank`` is a permutation position per node (low degree first); each
    triangle is found exactly once at its lowest-ranked vertex and credited
    to all three corners.
    """
    n = indptr.size - 1
    # forward adjacency: neighbors of strictly higher rank, id-sorted
    fdeg = np.zeros(n, np.int64)
    for u in range(n):
        ru = rank[u]
        for k in range(indptr[u], indptr[u + 1]):
            if rank[indices[k]] > ru:
                fdeg[u] += 1
    findptr = np.zeros(n + 1, np.int64)
    for u in range(n):
        findptr[u + 1] = findptr[u] + fdeg[u]
    findices = np.empty(findptr[n], indices.dtype)
    for u in range(n):
        pos = findptr[u]
        ru = rank[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if rank[v] > ru:
                findices[pos] = v
                pos += 1

    tri = np.zeros(n, np.int64)
    for u in range(n):
        for k in range(findptr[u], findptr[u + 1]):
            v = findices[k]
            i = findptr[u]
            j = findptr[v]
            iend = findptr[u + 1]
            jend = findptr[v + 1]
            while i < iend and j < jend:
                a = findices[i]
                b = findices[j]
                if a == b:
                    tri[u] += 1
                    tri[v] += 1
                    tri[a] += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
    return tri
