"""Naive breadth-first search on the N-particle product graph.

Vertices are N-subsets of the ring; x ~ y when one particle hops to an empty
neighbouring site.  Nothing here uses the closed-form distance in
``metric``; this module is the independent ground truth for it.
"""
from __future__ import annotations

from collections import deque

from .config import Configuration, sector_basis

__all__ = ["neighbours", "bfs_distances", "bfs_distance", "shortest_paths",
           "random_shortest_path", "PathCapExceeded"]


class PathCapExceeded(RuntimeError):
    pass


def neighbours(x: Configuration, blocked_edge=None):
    """Configurations reachable by one hop; ``blocked_edge`` (a 2-set) is never used."""
    L = x.L
    occ = set(x.sites)
    out = []
    for j in x.sites:
        for k in ((j + 1) % L, (j - 1) % L):
            if k in occ:
                continue
            if blocked_edge is not None and {j, k} == set(blocked_edge):
                continue
            out.append(Configuration(tuple(occ - {j} | {k}), L))
    # L = 2 gives the same neighbour twice
    return list(dict.fromkeys(out))


def bfs_distances(source: Configuration, blocked_edge=None) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in neighbours(u, blocked_edge):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def bfs_distance(x: Configuration, y: Configuration) -> int:
    return bfs_distances(x)[y]


def all_pairs(L: int, N: int) -> dict:
    return {x: bfs_distances(x) for x in sector_basis(L, N)}


def shortest_paths(x: Configuration, y: Configuration, cap: int = 10**6):
    """Every shortest path from x to y as lists of configurations.

    Raises PathCapExceeded once more than ``cap`` paths would be produced.
    """
    to_y = bfs_distances(y)
    k = to_y[x]
    paths = []

    def extend(path):
        u = path[-1]
        if u == y:
            paths.append(list(path))
            if len(paths) > cap:
                raise PathCapExceeded(cap)
            return
        for v in neighbours(u):
            if to_y.get(v) == to_y[u] - 1:
                path.append(v)
                extend(path)
                path.pop()

    extend([x])
    assert all(len(p) == k + 1 for p in paths)
    return paths


def random_shortest_path(x: Configuration, y: Configuration, rng):
    to_y = bfs_distances(y)
    path = [x]
    while path[-1] != y:
        u = path[-1]
        nxt = [v for v in neighbours(u) if to_y.get(v) == to_y[u] - 1]
        path.append(nxt[rng.integers(len(nxt))])
    return path
