import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from tdsolve.baseline import oracle_domset
from tdsolve.generators import random_connected_graph
from tdsolve.graph import Graph
from tdsolve.hybrid import HybridSolver, domset_table, solve_hybrid
from tdsolve.stats import INF, SolveStats
from tdsolve.treedepth import TreedepthDecomposition, chain_decomposition, dfs_decomposition

from conftest import cycle, path, petersen


def brute_table_entry(g, td, x, dset, targets):
    """Least |Z|, Z inside the subtree at x, with Z + dset dominating the subtree and Z dominating targets."""
    sub = list(td.subtree(x))
    dset = set(dset)
    for k in range(len(sub) + 1):
        for Z in combinations(sub, k):
            zn = set(Z).union(*(g.adj[z] for z in Z))
            dn = set(dset).union(*(g.adj[d] for d in dset)) if dset else set()
            if all(v in zn or v in dn for v in sub) and all(t in zn for t in targets):
                return k
    return INF


@pytest.mark.parametrize("mode", ["naive", "fast"])
def test_small_graphs(mode):
    assert solve_hybrid(Graph(1), conv_mode=mode) == 1
    assert solve_hybrid(cycle(4), conv_mode=mode) == 2
    assert solve_hybrid(petersen(), conv_mode=mode) == 3
    assert solve_hybrid(Graph(0), conv_mode=mode) == 0


def test_leaf_tables():
    td = chain_decomposition([1, 2])
    g = path(2)
    dominated = domset_table(g, td, 2, dset=[1])
    assert dominated.universe == ()
    assert dominated[()] == 0
    free = domset_table(g, td, 2)
    assert free.universe == (0,)
    assert free[()] == 1 and free[(0,)] == 1
    # a leaf whose ancestor is not adjacent: nothing above is reachable
    g3 = Graph(3, [(1, 3), (2, 3)])
    leaf = domset_table(g3, chain_decomposition([1, 3, 2]), 2)
    assert leaf.universe == (1,)
    assert leaf[()] == 1


def test_p3_middle_root():
    td = TreedepthDecomposition([2, 0, 2])
    m = domset_table(path(3), td, 2)
    assert m.universe == ()
    assert m[()] == 1


def test_unknown_mode():
    with pytest.raises(ValueError):
        HybridSolver(Graph(1), TreedepthDecomposition([0]), "slow")


def test_rejects_non_ancestor():
    with pytest.raises(ValueError):
        domset_table(path(3), chain_decomposition([1, 2, 3]), 2, dset=[3])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 8), st.integers(0, 10**6))
def test_tables_match_brute_force(n, extra, seed):
    rng = random.Random(seed)
    g = random_connected_graph(n, extra, rng)
    td = dfs_decomposition(g)
    x = rng.randint(1, n)
    anc = td.root_path(x)
    dset = [v for v in anc if rng.random() < 0.4]
    m = domset_table(g, td, x, dset)
    by_pos = {td.position(v): v for v in anc}
    for key, cost in m.to_dict().items():
        assert cost == brute_table_entry(g, td, x, dset, [by_pos[p] for p in key])
    assert m.offset_violations() == 0
    assert m.is_monotone()
    assert m.u <= td.depth - len(dset)


@pytest.mark.parametrize("mode", ["naive", "fast"])
@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 13), extra=st.integers(0, 13), seed=st.integers(0, 10**6))
def test_equals_oracle(mode, n, extra, seed):
    g = random_connected_graph(n, extra, random.Random(seed))
    stats = SolveStats("hybrid")
    assert solve_hybrid(g, conv_mode=mode, stats=stats) == oracle_domset(g)
    assert stats.violations == []


def test_memo_free_matches():
    rng = random.Random(3)
    for _ in range(20):
        g = random_connected_graph(rng.randint(1, 12), rng.randint(0, 10), rng)
        stats = SolveStats("hybrid")
        assert solve_hybrid(g, memo=False, stats=stats) == solve_hybrid(g)
        assert stats.violations == []
        assert stats.peak_recursion_depth <= dfs_decomposition(g).depth
