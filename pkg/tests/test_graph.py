import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from tdsolve.generators import random_connected_graph
from tdsolve.graph import (BoundariedGraph, Graph, GraphFormatError, closed_neighborhood,
                           edgeless_boundary, glue, glue_all, parse_graph, read_graph,
                           write_graph)

from conftest import complete, path


def test_parse_single_edge():
    g = parse_graph("p td 2 1\n1 2\n")
    assert g.n == 2 and g.edges() == [(1, 2)]


def test_parse_triangle_is_k3():
    assert parse_graph("p td 3 3\n1 2\n2 3\n1 3\n") == complete(3)


def test_duplicate_lines_collapse():
    g = parse_graph("p td 2 2\n1 2\n1 2\n")
    assert g.m == 1


def test_comments_bytes_and_streams():
    text = "c hello\np td 3 2\nc mid\n1 2\n3 2\n"
    assert parse_graph(text) == parse_graph(text.encode()) == parse_graph(io.StringIO(text))
    assert parse_graph(text).edges() == [(1, 2), (2, 3)]


@pytest.mark.parametrize("text, line", [
    ("1 2\n", 1),
    ("p td x 1\n", 1),
    ("p td 2 1\n1 3\n", 2),
    ("p td 2 1\n2 2\n", 2),
    ("p td 2 1\n1\n", 2),
    ("p td 2 1\np td 2 1\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 1)])


def test_adjacency_symmetric_and_edge_count():
    g = random_connected_graph(15, 20, random.Random(3))
    for v in g.vertices():
        for w in g.adj[v]:
            assert v in g.adj[w]
    assert g.m == sum(len(g.adj[v]) for v in g.vertices()) // 2


def test_closed_neighborhood_examples():
    assert closed_neighborhood(complete(3), []) == set()
    assert closed_neighborhood(complete(3), [1]) == {1, 2, 3}
    assert closed_neighborhood(path(4), [2]) == {1, 2, 3}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 25), st.integers(0, 40), st.integers(0, 10**6))
def test_write_parse_roundtrip(n, extra, seed):
    g = random_connected_graph(n, extra, random.Random(seed))
    text = write_graph(g)
    assert parse_graph(text) == g
    body = [tuple(map(int, ln.split())) for ln in text.splitlines()[1:]]
    assert body == sorted(body)


def test_read_graph(tmp_path):
    p = tmp_path / "g.gr"
    p.write_text(write_graph(complete(4)))
    assert read_graph(p) == complete(4)


def k2_boundary():
    return BoundariedGraph(Graph(2, [(1, 2)]), (1, 2))


def test_glue_identical_k2s():
    out = glue(k2_boundary(), k2_boundary())
    assert out.n == 2 and out.graph.edges() == [(1, 2)]


def test_glue_with_edgeless_boundary_is_path():
    p = BoundariedGraph(Graph(3, [(1, 3), (3, 2)]), (1, 2))
    out = glue(edgeless_boundary(2), p)
    assert out.n == 3 and out.graph == path(3).__class__(3, [(1, 3), (2, 3)])


def test_glue_two_stars_share_leaf():
    s1 = BoundariedGraph(Graph(3, [(1, 2), (1, 3)]), (2,))
    s2 = BoundariedGraph(Graph(4, [(1, 2), (1, 3), (1, 4)]), (4,))
    out = glue(s1, s2)
    assert out.n == s1.n + s2.n - 1
    assert out.graph.m == s1.graph.m + s2.graph.m
    assert len(out.graph.adj[2]) == 2


def test_glue_size_mismatch():
    with pytest.raises(ValueError):
        glue(edgeless_boundary(1), edgeless_boundary(2))


def _random_boundaried(rng: random.Random, s: int) -> BoundariedGraph:
    n = s + rng.randint(0, 5)
    edges = [tuple(rng.sample(range(1, n + 1), 2)) for _ in range(rng.randint(0, 2 * n))] if n > 1 else []
    bnd = tuple(rng.sample(range(1, n + 1), s))
    return BoundariedGraph(Graph(n, edges), bnd)


def _canonical(bg: BoundariedGraph):
    """Edge multiset with boundary vertices named by label and internals by degree pattern."""
    label = {v: ("b", i) for i, v in enumerate(bg.boundary)}
    g = bg.graph
    inner = sorted(sorted(label.get(w, ("i",)) for w in g.adj[v]) for v in bg.internal())
    bedges = sorted(tuple(sorted((label[u], label[v]))) for u, v in g.edges() if u in label and v in label)
    return g.n, g.m, bedges, inner


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_glue_identity_commutativity_associativity(s, seed):
    rng = random.Random(seed)
    a, b, c = (_random_boundaried(rng, s) for _ in range(3))
    assert glue(a, edgeless_boundary(s)).graph == a.graph
    assert _canonical(glue(a, b)) == _canonical(glue(b, a))
    assert _canonical(glue(glue(a, b), c)) == _canonical(glue(a, glue(b, c)))
    assert glue_all([a, b], s).n == glue(glue(edgeless_boundary(s), a), b).n
