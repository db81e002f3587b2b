"""Simple undirected graphs, the ``.gr`` format, and boundaried gluing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO


class GraphFormatError(ValueError):
    """Malformed graph or decomposition file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Undirected simple graph on vertices ``1..n``.

    Adjacency is kept as one frozenset per vertex; index 0 is unused so that
    ``g.adj[v]`` works with the 1-based ids used by the file formats.
    """

    __slots__ = ("n", "adj", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(a) for a in adj)
        self._m = sum(len(a) for a in adj) // 2

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return sorted((u, v) for u in self.vertices() for v in self.adj[u] if u < v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adj[v])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled to ``1..k`` in ascending id order.

        Returns the subgraph and the list mapping new id - 1 to old id.
        """
        old = sorted(set(keep))
        new_id = {v: i + 1 for i, v in enumerate(old)}
        edges = [(new_id[u], new_id[v]) for u, v in self.edges() if u in new_id and v in new_id]
        return Graph(len(old), edges), old

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def closed_neighborhood(g: Graph, vertices: Iterable[int]) -> set[int]:
    """N[S]: the vertices of ``S`` together with all their neighbours."""
    out: set[int] = set()
    for v in vertices:
        out.add(v)
        out |= g.adj[v]
    return out


def parse_graph(source: str | bytes | TextIO) -> Graph:
    """Parse a ``.gr`` file: ``c`` comments, header ``p td n m``, edge lines.

    Duplicate edges are merged; the header's edge count is not enforced.
    """
    if isinstance(source, bytes):
        source = source.decode()
    lines = source.splitlines() if isinstance(source, str) else source
    n = None
    edges = []
    for lineno, raw in enumerate(lines, 1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(fields) != 4 or fields[1] != "td":
                raise GraphFormatError("expected header 'p td <n> <m>'", lineno)
            try:
                n, _ = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphFormatError("non-integer header field", lineno) from None
            if n < 0:
                raise GraphFormatError("negative vertex count", lineno)
            continue
        if n is None:
            raise GraphFormatError("edge before header", lineno)
        if len(fields) != 2:
            raise GraphFormatError("expected '<u> <v>'", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError("non-integer vertex id", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex id out of range 1..{n}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("missing header 'p td <n> <m>'")
    return Graph(n, edges)


def write_graph(g: Graph) -> str:
    lines = [f"p td {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as f:
        return parse_graph(f.read())


@dataclass(frozen=True)
class BoundariedGraph:
    """A graph with ``s`` labelled boundary vertices (label i is ``boundary[i-1]``)."""

    graph: Graph
    boundary: tuple[int, ...]

    def __post_init__(self):
        b = tuple(self.boundary)
        object.__setattr__(self, "boundary", b)
        if len(set(b)) != len(b):
            raise ValueError("boundary vertices must be distinct")
        if any(not 1 <= v <= self.graph.n for v in b):
            raise ValueError("boundary vertex out of range")

    @property
    def s(self) -> int:
        return len(self.boundary)

    @property
    def n(self) -> int:
        return self.graph.n

    def internal(self) -> list[int]:
        b = set(self.boundary)
        return [v for v in self.graph.vertices() if v not in b]


def glue(g1: BoundariedGraph, g2: BoundariedGraph) -> BoundariedGraph:
    """Disjoint union of ``g1`` and ``g2`` with equally-labelled boundary vertices merged.

    Vertices of ``g1`` keep their ids; internal vertices of ``g2`` are renumbered
    ``g1.n + 1, ...`` in ascending order of their old ids.
    """
    if g1.s != g2.s:
        raise ValueError(f"boundary sizes differ: {g1.s} != {g2.s}")
    mapping = {b2: b1 for b1, b2 in zip(g1.boundary, g2.boundary)}
    nxt = g1.n
    for v in g2.internal():
        nxt += 1
        mapping[v] = nxt
    edges = g1.graph.edges() + [(mapping[u], mapping[v]) for u, v in g2.graph.edges()]
    return BoundariedGraph(Graph(nxt, edges), g1.boundary)


def glue_all(parts: Iterable[BoundariedGraph], s: int) -> BoundariedGraph:
    """Glue a sequence of ``s``-boundaried graphs; the empty gluing is the bare boundary."""
    acc = edgeless_boundary(s)
    for p in parts:
        acc = glue(acc, p)
    return acc


def edgeless_boundary(s: int) -> BoundariedGraph:
    """The gluing identity: ``s`` isolated boundary vertices and nothing else."""
    return BoundariedGraph(Graph(s), tuple(range(1, s + 1)))
