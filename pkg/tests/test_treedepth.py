import random

import pytest
from hypothesis import given, settings, strategies as st

from tdsolve.generators import random_connected_graph
from tdsolve.graph import Graph
from tdsolve.treedepth import (DecompositionError, PathIndex, TreedepthDecomposition,
                               chain_decomposition, dfs_decomposition, exact_treedepth_small,
                               parse_decomposition, validate, write_decomposition)

from conftest import complete, path, petersen, star


def test_validate_chain_on_path():
    v = validate(path(3), TreedepthDecomposition([0, 1, 2]))
    assert v.ok and TreedepthDecomposition([0, 1, 2]).depth == 3


def test_validate_reports_sibling_edge():
    v = validate(complete(3), TreedepthDecomposition([0, 1, 1]))
    assert not v and v.edge == (2, 3)


def test_star_rooted_at_center():
    td = TreedepthDecomposition([0] + [1] * 4)
    assert validate(star(4), td) and td.depth == 2


def test_non_tree_parent_arrays_rejected():
    with pytest.raises(DecompositionError):
        TreedepthDecomposition([0, 0, 1]).root
    with pytest.raises(DecompositionError):
        TreedepthDecomposition([2, 1]).root
    with pytest.raises(DecompositionError):
        TreedepthDecomposition([0, 3]).root


def test_root_path():
    chain = TreedepthDecomposition([0, 1, 2])
    assert chain.root_path(1) == []
    assert chain.root_path(3) == [1, 2]
    assert TreedepthDecomposition([0, 1, 1, 1]).root_path(4) == [1]


def test_dfs_examples():
    td = dfs_decomposition(complete(3))
    assert td.depth == 3
    assert dfs_decomposition(path(5)).depth == 5
    assert validate(petersen(), dfs_decomposition(petersen()))


def test_dfs_rejects_disconnected():
    with pytest.raises(DecompositionError):
        dfs_decomposition(Graph(3, [(1, 2)]))


def test_exact_treedepth_examples():
    assert exact_treedepth_small(Graph(1)) == 1
    assert exact_treedepth_small(path(4)) == 3
    assert exact_treedepth_small(complete(4)) == 4
    for n in range(1, 11):
        assert exact_treedepth_small(path(n)) == (n).bit_length()
    with pytest.raises(ValueError):
        exact_treedepth_small(path(13))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 12), st.integers(0, 10**6))
def test_dfs_valid_and_not_below_treedepth(n, extra, seed):
    g = random_connected_graph(n, extra, random.Random(seed))
    td = dfs_decomposition(g)
    assert validate(g, td)
    assert exact_treedepth_small(g) <= td.depth <= n


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 30), st.integers(0, 10**6))
def test_root_paths_and_edges(n, extra, seed):
    g = random_connected_graph(n, extra, random.Random(seed))
    td = dfs_decomposition(g)
    for x in g.vertices():
        p = td.root_path(x)
        assert len(p) + 1 <= td.depth
        assert [td.position(v) for v in p] == list(range(len(p)))
        inside = set(td.subtree(x)) | set(p)
        assert all(w in inside for w in g.adj[x])


def test_decomposition_roundtrip():
    td = dfs_decomposition(petersen())
    text = write_decomposition(td)
    assert text.splitlines()[0] == f"s td 10 {td.depth}"
    assert parse_decomposition(text) == td


def test_parse_decomposition_errors():
    with pytest.raises(Exception):
        parse_decomposition("s td 2 2\n0\n")
    with pytest.raises(Exception):
        parse_decomposition("s td 2 2\n0\n0\n")


def test_path_index_masks():
    g = path(4)
    td = chain_decomposition([2, 3, 1, 4])
    idx = PathIndex(g, td)
    # 4 sits at depth 3 below 2,3,1; its only ancestor neighbour is 3 (position 1)
    assert idx.up[4] == 0b010
    # vertices below 1 (itself and 4) touch 2 and 3
    assert idx.reach[1] == 0b011
    # D = {2} dominates 2, 3 and 1, the positions 0..2 of the path through 4
    assert idx.dominated(4, 0b001) == 0b0111
