"""Seeded random instances for tests, benchmarks and the demos."""

from __future__ import annotations

import os
import random

from .graph import Graph
from .treedepth import TreedepthDecomposition, chain_decomposition, dfs_decomposition

DEFAULT_SEED = 20160000


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    """The ``TDSOLVE_SEED`` environment variable if set, else ``default``."""
    raw = os.environ.get("TDSOLVE_SEED")
    return int(raw) if raw else default


def _relabel(n: int, edges, rng: random.Random) -> Graph:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return Graph(n, [(perm[u - 1], perm[v - 1]) for u, v in edges if u != v])


def random_connected_graph(n: int, extra: int, rng: random.Random) -> Graph:
    """Random recursive tree on ``n`` vertices plus ``extra`` uniform chords, randomly relabelled."""
    edges = [(v, rng.randint(1, v - 1)) for v in range(2, n + 1)]
    if n > 1:
        for _ in range(extra):
            edges.append(tuple(rng.sample(range(1, n + 1), 2)))
    return _relabel(n, edges, rng)


def random_shallow_graph(n: int, height: int, extra: int, rng: random.Random) -> Graph:
    """Random tree of bounded height with ``extra`` chords from a vertex to one of its ancestors.

    The tree closure contains every edge, so the treedepth is at most ``height + 1``.
    """
    parent = [0, 0]
    depth = [0, 0]
    for v in range(2, n + 1):
        while True:
            p = rng.randint(1, v - 1)
            if depth[p] < height:
                break
        parent.append(p)
        depth.append(depth[p] + 1)
    edges = [(v, parent[v]) for v in range(2, n + 1)]
    if n > 2:
        for _ in range(extra):
            v = rng.randint(2, n)
            a = parent[v]
            for _ in range(rng.randint(0, depth[v] - 1)):
                if parent[a]:
                    a = parent[a]
            edges.append((v, a))
    return _relabel(n, edges, rng)


def small_corpus(count: int, max_n: int, seed: int):
    """``count`` random connected graphs with ``n <= max_n`` and their DFS decompositions."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_n)
        g = random_connected_graph(n, rng.randint(0, n), rng)
        yield g, dfs_decomposition(g)


def large_corpus(count: int, max_n: int, max_depth: int, seed: int):
    """``count`` random connected graphs with ``n <= max_n`` whose DFS decomposition has depth ``<= max_depth``."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(max(1, max_n // 3), max_n)
        g = random_shallow_graph(n, rng.randint(3, 10), rng.randint(0, n), rng)
        td = dfs_decomposition(g)
        if td.depth <= max_depth:
            made += 1
            yield g, td


def clique_chain(t: int) -> tuple[Graph, TreedepthDecomposition]:
    """K_t with its (only) decomposition, a chain: every root-path vertex stays relevant."""
    edges = [(u, v) for u in range(1, t + 1) for v in range(u + 1, t + 1)]
    return Graph(t, edges), chain_decomposition(list(range(1, t + 1)))


def local_tree_graph(n: int, depth: int, reach: int, rng: random.Random, p_chord: float = 0.5):
    """Large graph with a supplied decomposition of exactly ``depth`` levels.

    The decomposition is a random tree filled level by level; every vertex is
    adjacent to its parent and, with probability ``p_chord`` each, to its
    ancestors up to ``reach`` levels higher. Returns ``(graph, decomposition)``.
    """
    if n < depth:
        raise ValueError("need at least one vertex per level")
    parent = [0] * (n + 1)
    level = [0] * (n + 1)
    # a spine guarantees the full depth; the rest attach below random shallower vertices
    for v in range(2, depth + 1):
        parent[v] = v - 1
        level[v] = v - 1
    for v in range(depth + 1, n + 1):
        while True:
            p = rng.randint(1, v - 1)
            if level[p] < depth - 1:
                break
        parent[v] = p
        level[v] = level[p] + 1
    edges = []
    for v in range(2, n + 1):
        a = parent[v]
        edges.append((v, a))
        for _ in range(reach - 1):
            a = parent[a]
            if not a:
                break
            if rng.random() < p_chord:
                edges.append((v, a))
    return Graph(n, edges), TreedepthDecomposition(parent[1:])
