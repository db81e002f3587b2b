"""Treedepth decompositions: storage, validation, root paths and construction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, TextIO

from .graph import Graph, GraphFormatError


class DecompositionError(ValueError):
    """A decomposition that is not a valid treedepth decomposition of its graph."""


class TreedepthDecomposition:
    """Rooted tree over ``1..n`` given as a parent array (0 marks the root).

    ``parent[v - 1]`` is the parent of ``v``. Depth positions are 0-based
    (the root sits at position 0); ``height`` counts vertices on the longest
    root-to-leaf path.
    """

    def __init__(self, parent: Sequence[int]):
        self.parent = tuple(int(p) for p in parent)
        self.n = len(self.parent)

    @classmethod
    def from_parent_map(cls, n: int, parent: dict[int, int]) -> "TreedepthDecomposition":
        return cls([parent.get(v, 0) for v in range(1, n + 1)])

    def parent_of(self, v: int) -> int:
        return self.parent[v - 1]

    @cached_property
    def _structure(self):
        """Root, children lists and depth positions; raises on a non-tree."""
        n = self.n
        roots = [v for v in range(1, n + 1) if self.parent[v - 1] == 0]
        if n == 0:
            return 0, [[]], [0]
        if len(roots) != 1:
            raise DecompositionError(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(n + 1)]
        for v in range(1, n + 1):
            p = self.parent[v - 1]
            if p:
                if not 1 <= p <= n:
                    raise DecompositionError(f"parent of {v} out of range: {p}")
                if p == v:
                    raise DecompositionError(f"vertex {v} is its own parent")
                children[p].append(v)
        pos = [-1] * (n + 1)
        root = roots[0]
        pos[root] = 0
        stack = [root]
        seen = 1
        while stack:
            v = stack.pop()
            for c in children[v]:
                pos[c] = pos[v] + 1
                seen += 1
                stack.append(c)
        if seen != n:
            bad = next(v for v in range(1, n + 1) if pos[v] < 0)
            raise DecompositionError(f"cycle in parent array through vertex {bad}")
        return root, children, pos

    @property
    def root(self) -> int:
        return self._structure[0]

    def children(self, v: int) -> list[int]:
        return self._structure[1][v]

    def is_leaf(self, v: int) -> bool:
        return not self._structure[1][v]

    def position(self, v: int) -> int:
        """Depth position of ``v`` (root = 0)."""
        return self._structure[2][v]

    @property
    def depth(self) -> int:
        if self.n == 0:
            return 0
        return max(self._structure[2][1:]) + 1

    def root_path(self, x: int) -> list[int]:
        """Ancestors of ``x``, root first, excluding ``x`` itself."""
        path = []
        p = self.parent[x - 1]
        while p:
            path.append(p)
            p = self.parent[p - 1]
        path.reverse()
        return path

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if ``a`` is a proper ancestor of ``v``."""
        p = self.parent[v - 1]
        while p:
            if p == a:
                return True
            p = self.parent[p - 1]
        return False

    def subtree(self, x: int) -> list[int]:
        out = []
        stack = [x]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self._structure[1][v])
        return out

    def postorder(self) -> list[int]:
        order = []
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self._structure[1][v]):
                stack.append((c, False))
        return order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreedepthDecomposition):
            return NotImplemented
        return self.parent == other.parent

    def __repr__(self) -> str:
        return f"TreedepthDecomposition(n={self.n})"


@dataclass(frozen=True)
class Validation:
    ok: bool
    message: str = ""
    edge: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(g: Graph, td: TreedepthDecomposition) -> Validation:
    """Check that ``td`` is a rooted tree on V(g) and every edge is ancestor-related."""
    if td.n != g.n:
        return Validation(False, f"decomposition covers {td.n} vertices, graph has {g.n}")
    try:
        td._structure
    except DecompositionError as e:
        return Validation(False, str(e))
    pos = td._structure[2]
    for u, v in g.edges():
        lo, hi = (u, v) if pos[u] < pos[v] else (v, u)
        if pos[lo] == pos[hi] or not td.is_ancestor(lo, hi):
            return Validation(False, f"edge {{{u}, {v}}} joins vertices that are not ancestor-related", (u, v))
    return Validation(True)


def require_valid(g: Graph, td: TreedepthDecomposition) -> None:
    check = validate(g, td)
    if not check:
        raise DecompositionError(check.message)


def dfs_decomposition(g: Graph) -> TreedepthDecomposition:
    """DFS tree from the lowest id, visiting neighbours in ascending order.

    Every non-tree edge of a DFS tree is a back edge, so the tree is a valid
    treedepth decomposition of a connected graph.
    """
    if g.n == 0:
        return TreedepthDecomposition([])
    if not g.is_connected():
        raise DecompositionError("graph is disconnected")
    parent = [0] * (g.n + 1)
    visited = [False] * (g.n + 1)
    nbrs = [sorted(a) for a in g.adj]
    visited[1] = True
    stack = [(1, iter(nbrs[1]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if not visited[w]:
                visited[w] = True
                parent[w] = v
                stack.append((w, iter(nbrs[w])))
                break
        else:
            stack.pop()
    return TreedepthDecomposition(parent[1:])


def chain_decomposition(order: Sequence[int]) -> TreedepthDecomposition:
    """Single root-to-leaf path visiting ``order`` top-down; valid for any graph."""
    parent = {}
    for a, b in zip(order, order[1:]):
        parent[b] = a
    return TreedepthDecomposition.from_parent_map(len(order), parent)


MAX_EXACT_N = 12


def exact_treedepth_small(g: Graph) -> int:
    """Exact treedepth by the deletion recurrence; meant as a test oracle.

    td(K1) = 1, td of a disconnected graph is the max over components, and a
    connected graph has td = 1 + min over v of td(G - v).
    """
    if g.n > MAX_EXACT_N:
        raise ValueError(f"exact treedepth limited to n <= {MAX_EXACT_N}, got {g.n}")
    if g.n == 0:
        return 0
    nb = [0] * g.n
    for v in g.vertices():
        for w in g.adj[v]:
            nb[v - 1] |= 1 << (w - 1)
    memo: dict[int, int] = {}

    def components(mask: int) -> list[int]:
        comps = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = nb[b.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def td(mask: int) -> int:
        if mask & (mask - 1) == 0:
            return 1 if mask else 0
        if mask in memo:
            return memo[mask]
        comps = components(mask)
        if len(comps) > 1:
            best = max(td(c) for c in comps)
        else:
            best = g.n + 1
            rest = mask
            while rest:
                b = rest & -rest
                rest ^= b
                best = min(best, 1 + td(mask ^ b))
        memo[mask] = best
        return best

    return td((1 << g.n) - 1)


def parse_decomposition(source: str | bytes | TextIO) -> TreedepthDecomposition:
    """Parse a ``.td`` file: ``c`` comments, header ``s td n depth``, n parent lines."""
    if isinstance(source, bytes):
        source = source.decode()
    lines = source.splitlines() if isinstance(source, str) else source
    n = None
    parents: list[int] = []
    for lineno, raw in enumerate(lines, 1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] == "s":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(fields) != 4 or fields[1] != "td":
                raise GraphFormatError("expected header 's td <n> <depth>'", lineno)
            try:
                n = int(fields[2])
                declared = int(fields[3])
            except ValueError:
                raise GraphFormatError("non-integer header field", lineno) from None
            continue
        if n is None:
            raise GraphFormatError("parent line before header", lineno)
        if len(fields) != 1:
            raise GraphFormatError("expected a single parent id", lineno)
        try:
            p = int(fields[0])
        except ValueError:
            raise GraphFormatError("non-integer parent id", lineno) from None
        if not 0 <= p <= n:
            raise GraphFormatError(f"parent id out of range 0..{n}", lineno)
        parents.append(p)
    if n is None:
        raise GraphFormatError("missing header 's td <n> <depth>'")
    if len(parents) != n:
        raise GraphFormatError(f"expected {n} parent lines, found {len(parents)}")
    td = TreedepthDecomposition(parents)
    if n and td.depth != declared:
        raise DecompositionError(f"header declares depth {declared}, tree has depth {td.depth}")
    return td


def write_decomposition(td: TreedepthDecomposition) -> str:
    lines = [f"s td {td.n} {td.depth}"]
    lines.extend(str(p) for p in td.parent)
    return "\n".join(lines) + "\n"


def read_decomposition(path) -> TreedepthDecomposition:
    with open(path) as f:
        return parse_decomposition(f.read())


class PathIndex:
    """Per-vertex bitmasks over depth positions, shared by the solvers.

    ``up[v]``: positions of ancestors adjacent to ``v``.
    ``reach[v]``: positions of ancestors of ``v`` adjacent to some vertex of
    the subtree at ``v``; only these can ever be dominated from that subtree.
    """

    def __init__(self, g: Graph, td: TreedepthDecomposition):
        require_valid(g, td)
        self.g = g
        self.td = td
        n = g.n
        self.pos = [td.position(v) if v else 0 for v in range(n + 1)]
        self.children = [td.children(v) if v else [] for v in range(n + 1)]
        self.up = [0] * (n + 1)
        for v in range(1, n + 1):
            m = 0
            for w in g.adj[v]:
                if self.pos[w] < self.pos[v]:
                    m |= 1 << self.pos[w]
            self.up[v] = m
        self.reach = [0] * (n + 1)
        for v in td.postorder():
            r = self.up[v]
            bit = 1 << self.pos[v]
            for c in self.children[v]:
                r |= self.reach[c] & ~bit
            self.reach[v] = r
        self._paths: dict[int, list[int]] = {}
        self._nbr: dict[int, list[int]] = {}

    def path(self, x: int) -> list[int]:
        """Root path of ``x`` including ``x``; entry i sits at depth position i."""
        p = self._paths.get(x)
        if p is None:
            p = self.td.root_path(x) + [x]
            self._paths[x] = p
        return p

    def path_neighbors(self, x: int) -> list[int]:
        """For each position i on x's path, the mask of adjacent positions on it."""
        nb = self._nbr.get(x)
        if nb is None:
            path = self.path(x)
            nb = [self.up[v] for v in path]
            for j, v in enumerate(path):
                m = self.up[v]
                while m:
                    b = m & -m
                    m ^= b
                    nb[b.bit_length() - 1] |= 1 << j
            self._nbr[x] = nb
        return nb

    def dominated(self, x: int, dmask: int) -> int:
        """Positions on x's path (inclusive) lying in N[D] for D given as a position mask."""
        nb = self.path_neighbors(x)
        out = dmask
        m = dmask
        while m:
            b = m & -m
            m ^= b
            out |= nb[b.bit_length() - 1]
        return out
