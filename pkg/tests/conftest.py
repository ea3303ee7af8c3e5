"""Shared independent oracles for the test suite.

These deliberately re-implement definitions in the most literal way possible
(BFS over adjacency dicts, itertools enumeration, four nested loops) so that
library results are checked against code that shares nothing with them.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations

import pytest


def bfs_dist(edges, source):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    dist = {source: 0}
    q = deque([source])
    while q:
        x = q.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def oracle_boundary(vertices, edges, subset):
    """Vertices at BFS distance exactly 1 from the set."""
    out = set()
    for v in vertices:
        if v in subset:
            continue
        best = None
        for a in subset:
            d = bfs_dist(edges, a).get(v)
            if d is not None and (best is None or d < best):
                best = d
        if best == 1:
            out.add(v)
    return out


def oracle_adjacency(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def oracle_min_ratio(vertices, edges, candidates, max_size):
    """Minimum |boundary|/|set| over all non-empty subsets of ``candidates``
    with at most max_size elements, via plain itertools enumeration."""
    adj = oracle_adjacency(edges)
    best = None
    for k in range(1, max_size + 1):
        for combo in combinations(sorted(candidates), k):
            s = set(combo)
            bd = set()
            for v in s:
                bd |= adj.get(v, set())
            bd -= s
            ratio = Fraction(len(bd), len(s))
            if best is None or ratio < best:
                best = ratio
    return best


def oracle_delta(vertices, edges):
    """Sharp four-point constant by four nested loops over ordered tuples."""
    dist = {v: bfs_dist(edges, v) for v in vertices}
    best = Fraction(0)
    for x in vertices:
        for y in vertices:
            for z in vertices:
                for o in vertices:
                    gp = lambda a, b: Fraction(dist[a][o] + dist[b][o] - dist[a][b], 2)
                    val = min(gp(x, z), gp(z, y)) - gp(x, y)
                    if val > best:
                        best = val
    return best


@pytest.fixture
def rng_seeds():
    return list(range(10))
