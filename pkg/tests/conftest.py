"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own machinery: cycle
enumeration by permutation scan, spanning forests by BFS connectivity,
visibility by exhaustive simple-path search.
"""

import itertools
import random
from fractions import Fraction

import pytest

from wforest.graph import Graph, build_graph, edge
from wforest.weights import EdgeOrder


def random_connected_graph(rand: random.Random, n: int, extra=None) -> Graph:
    """Random tree on n vertices plus `extra` random chords (default random)."""
    vertices = list(range(n))
    edges = set()
    for v in range(1, n):
        edges.add(edge(v, rand.randrange(v)))
    max_extra = n * (n - 1) // 2 - (n - 1)
    if extra is None:
        extra = rand.randint(0, min(max_extra, n))
    pool = [edge(u, v) for u in range(n) for v in range(u + 1, n)
            if edge(u, v) not in edges]
    rand.shuffle(pool)
    edges.update(pool[:extra])
    return build_graph(vertices, edges)


def random_potential(rand: random.Random, g: Graph) -> dict[int, Fraction]:
    return {v: Fraction(rand.randint(1, 6), rand.randint(1, 6)) for v in g.vertices}


def random_tiebreak(rand: random.Random, g: Graph) -> list:
    order = g.sorted_edges()
    rand.shuffle(order)
    return order


def random_order(rand: random.Random, g: Graph) -> EdgeOrder:
    return EdgeOrder(g, random_potential(rand, g), random_tiebreak(rand, g))


def cycles_by_permutation(g: Graph) -> set[tuple[int, ...]]:
    """Every simple cycle as its canonical vertex tuple, by scanning all
    permutations of all vertex subsets.  Usable up to ~8 vertices."""
    eset = g.edges
    found = set()
    verts = list(g.vertices)
    for k in range(3, len(verts) + 1):
        for subset in itertools.combinations(verts, k):
            first = subset[0]
            for perm in itertools.permutations(subset[1:]):
                seq = (first,) + perm
                if seq[1] > seq[-1]:
                    continue  # canonical: second vertex below the last
                ok = all(edge(seq[i], seq[i + 1]) in eset for i in range(k - 1))
                if ok and edge(seq[-1], seq[0]) in eset:
                    found.add(seq)
    return found


def canonical_cycle_vertices(cycle_edges) -> tuple[int, ...]:
    """Recover the canonical vertex tuple from an edge-list cycle."""
    adj = {}
    for u, v in cycle_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = min(adj)
    nxt = min(adj[start])
    seq = [start, nxt]
    while True:
        a, b = seq[-2], seq[-1]
        nxt = adj[b][0] if adj[b][1] == a else adj[b][1]
        if nxt == start:
            return tuple(seq)
        seq.append(nxt)


def greedy_max_forest(g: Graph, order: EdgeOrder, fixed=frozenset()) -> frozenset:
    """Maximum spanning forest by explicit greedy with BFS connectivity
    (no union-find): independent realization of the cut criterion."""
    kept = set(fixed)

    def connected(u, v):
        seen = {u}
        stack = [u]
        adj = {}
        for a, b in kept:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while stack:
            x = stack.pop()
            if x == v:
                return True
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return v in seen

    for e in sorted((e for e in g.edges if e not in fixed),
                    key=order.key, reverse=True):
        if not connected(*e):
            kept.add(e)
    return frozenset(kept)


def brute_visibility(g: Graph, pot_x, x: int) -> set[int]:
    """Endpoints of simple paths from x whose vertices all weigh <= 1."""
    reachable = set()

    def walk(v, on_path):
        reachable.add(v)
        for y in g.adjacency[v]:
            if y not in on_path and pot_x[y] <= 1:
                walk(y, on_path | {y})

    if pot_x[x] <= 1:
        walk(x, {x})
    else:
        reachable.add(x)
    return reachable


@pytest.fixture
def rand():
    return random.Random(1729)
