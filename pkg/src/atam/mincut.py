"""Stoer-Wagner global minimum cut for small weighted undirected graphs."""
from __future__ import annotations

from typing import Hashable, Mapping, TypeVar

N = TypeVar("N", bound=Hashable)


def global_min_cut(adj: Mapping[N, Mapping[N, int]]) -> tuple[int, frozenset[N]]:
    """Return ``(weight, side)`` of a minimum cut.

    ``adj`` is a symmetric adjacency map with nonnegative integer weights.
    ``side`` is one shore of an optimal cut. A disconnected graph has a cut
    of weight 0. Needs at least two nodes.
    """
    nodes = list(adj)
    if len(nodes) < 2:
        raise ValueError("a cut needs at least two nodes")
    # contracted supernodes are indexed 0..n-1; members[i] lists the originals
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    w = [[0] * n for _ in range(n)]
    for u, nbrs in adj.items():
        for v, weight in nbrs.items():
            if u != v:
                w[index[u]][index[v]] = weight
    members = [[v] for v in nodes]
    alive = list(range(n))
    best = None
    best_side: list[N] = []

    while len(alive) > 1:
        # maximum adjacency ordering
        start = alive[0]
        conn = {v: w[start][v] for v in alive if v != start}
        prev, last = start, start
        while conn:
            nxt = max(conn, key=lambda v: (conn[v], -v))
            cut_of_phase = conn.pop(nxt)
            prev, last = last, nxt
            for v in conn:
                conn[v] += w[nxt][v]
        if best is None or cut_of_phase < best:
            best = cut_of_phase
            best_side = list(members[last])
        # merge last into prev
        for v in alive:
            if v not in (prev, last):
                w[prev][v] += w[last][v]
                w[v][prev] = w[prev][v]
        members[prev].extend(members[last])
        alive.remove(last)

    return best, frozenset(best_side)
