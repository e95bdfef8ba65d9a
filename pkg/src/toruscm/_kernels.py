"""Compiled hot loops: half-edge matching and union-find.

The matching kernel mirrors `StubPool` exactly: at every step an unordered
pair of free half-edges is drawn uniformly among all currently allowed pairs,
via a compartment-pair bucket chosen proportionally to its live pair count
(Fenwick tree, O(log #buckets) per update) followed by uniform stubs inside
the bucket.  Randomness comes from an inlined SplitMix64 stream so results
are reproducible from a single integer seed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _next_u64(state):
    state[0] = state[0] + _SM_GAMMA
    z = state[0]
    z = (z ^ (z >> _S30)) * _SM_MUL1
    z = (z ^ (z >> _S27)) * _SM_MUL2
    return z ^ (z >> _S31)


@njit(cache=True)
def _rand_unit(state):
    return float(_next_u64(state) >> _S11) * _INV_2_53


@njit(cache=True)
def _rand_below(state, n):
    r = int(_rand_unit(state) * n)
    if r >= n:
        r = n - 1
    return r


@njit(cache=True)
def _fw_update(tree, i, delta):
    idx = i + 1
    size = tree.size - 1
    while idx <= size:
        tree[idx] += delta
        idx += idx & (-idx)


@njit(cache=True)
def _fw_select(tree, top_bit, r):
    # largest leaf index with prefix sum <= r (0-based); requires r < total
    size = tree.size - 1
    pos = 0
    bm = top_bit
    while bm != 0:
        nxt = pos + bm
        if nxt <= size and tree[nxt] <= r:
            pos = nxt
            r -= tree[nxt]
        bm >>= 1
    return pos


@njit(cache=True)
def _pair_count(free, a, b):
    if a == b:
        return free[a] * (free[a] - 1) // 2
    return free[a] * free[b]


@njit(cache=True)
def _refresh_comp(free, counts, tree, comp_indptr, comp_bidx, bucket_a, bucket_b, x):
    moved = np.int64(0)
    for t in range(comp_indptr[x], comp_indptr[x + 1]):
        b = comp_bidx[t]
        cnt = _pair_count(free, bucket_a[b], bucket_b[b])
        delta = cnt - counts[b]
        if delta != 0:
            counts[b] = cnt
            _fw_update(tree, b, delta)
            moved += delta
    return moved


@njit(cache=True)
def match_kernel(seed, stub_vertex, seg_start, free, bucket_a, bucket_b, comp_indptr, comp_bidx, eu, ev):
    """Run the matching to exhaustion; returns the number of edges drawn.

    `stub_vertex` holds the owning vertex of every half-edge, segmented by
    compartment (`seg_start`, `free`); both are consumed in place, so `free`
    ends up holding the per-compartment leftover counts.
    """
    state = np.empty(1, np.uint64)
    state[0] = np.uint64(seed)

    n_buckets = bucket_a.size
    counts = np.zeros(n_buckets, np.int64)
    tree = np.zeros(n_buckets + 1, np.int64)
    total = np.int64(0)
    for b in range(n_buckets):
        cnt = _pair_count(free, bucket_a[b], bucket_b[b])
        counts[b] = cnt
        _fw_update(tree, b, cnt)
        total += cnt

    top_bit = 1
    while top_bit * 2 <= n_buckets:
        top_bit *= 2

    n_edges = 0
    while total > 0:
        r = np.int64(_rand_unit(state) * total)
        if r >= total:
            r = total - 1
        b = _fw_select(tree, top_bit, r)
        a = bucket_a[b]
        c = bucket_b[b]

        if a == c:
            i = _rand_below(state, free[a])
            j = _rand_below(state, free[a] - 1)
            if j >= i:
                j += 1
            u = stub_vertex[seg_start[a] + i]
            v = stub_vertex[seg_start[a] + j]
            hi = i if i > j else j
            lo = j if i > j else i
            free[a] -= 1
            stub_vertex[seg_start[a] + hi] = stub_vertex[seg_start[a] + free[a]]
            free[a] -= 1
            stub_vertex[seg_start[a] + lo] = stub_vertex[seg_start[a] + free[a]]
        else:
            i = _rand_below(state, free[a])
            j = _rand_below(state, free[c])
            u = stub_vertex[seg_start[a] + i]
            v = stub_vertex[seg_start[c] + j]
            free[a] -= 1
            stub_vertex[seg_start[a] + i] = stub_vertex[seg_start[a] + free[a]]
            free[c] -= 1
            stub_vertex[seg_start[c] + j] = stub_vertex[seg_start[c] + free[c]]

        eu[n_edges] = u
        ev[n_edges] = v
        n_edges += 1

        total += _refresh_comp(free, counts, tree, comp_indptr, comp_bidx, bucket_a, bucket_b, a)
        if c != a:
            total += _refresh_comp(free, counts, tree, comp_indptr, comp_bidx, bucket_a, bucket_b, c)

    return n_edges


@njit(cache=True)
def _uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def component_labels(n, eu, ev):
    """Union-find (path halving, union by size) over an edge list.

    Returns (labels, n_components); labels are contiguous ids in first-seen
    vertex order.
    """
    parent = np.arange(n)
    size = np.ones(n, np.int64)
    for t in range(eu.size):
        ru = _uf_find(parent, eu[t])
        rv = _uf_find(parent, ev[t])
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
    labels = np.empty(n, np.int64)
    root_label = np.full(n, -1, np.int64)
    next_label = 0
    for v in range(n):
        r = _uf_find(parent, v)
        if root_label[r] < 0:
            root_label[r] = next_label
            next_label += 1
        labels[v] = root_label[r]
    return labels, next_label
