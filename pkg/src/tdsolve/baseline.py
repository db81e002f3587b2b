"""Reference algorithms: simple branching for 3-Coloring and Vertex Cover, the
classic three-state table DP for Dominating Set, and exhaustive oracles."""

from __future__ import annotations

import sys
import time
from itertools import combinations

import numpy as np

from .graph import Graph
from .stats import SolveStats
from .tables import BIG, CostTable, convolve, lift
from .treedepth import PathIndex, TreedepthDecomposition, dfs_decomposition


def _prepare(g: Graph, td: TreedepthDecomposition | None) -> PathIndex:
    if td is None:
        td = dfs_decomposition(g)
    idx = PathIndex(g, td)
    limit = td.depth * 3 + 100
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    return idx


# 3-Coloring ------------------------------------------------------------------

def color3_branch(g: Graph, td: TreedepthDecomposition | None = None,
                  stats: SolveStats | None = None) -> bool:
    """3-colourability by branching on each node's colour top-down.

    Children of a node only interact through their common ancestors, so once
    the root path is coloured each child subtree is decided on its own.
    """
    if g.n == 0:
        return True
    idx = _prepare(g, td)
    st = stats if stats is not None else SolveStats("color3-branch")
    t0 = time.perf_counter()
    colors = [0] * (idx.td.depth + 1)

    def colorable(x: int) -> bool:
        st.enter()
        try:
            p = idx.pos[x]
            used = 0
            m = idx.up[x]
            while m:
                b = m & -m
                m ^= b
                used |= 1 << colors[b.bit_length() - 1]
            for c in (1, 2, 3):
                if used >> c & 1:
                    continue
                colors[p] = c
                if all(colorable(y) for y in idx.children[x]):
                    return True
            return False
        finally:
            st.leave()

    ok = colorable(idx.td.root)
    st.answer = ok
    st.wall_time_ms = (time.perf_counter() - t0) * 1000
    return ok


# Vertex Cover ----------------------------------------------------------------

def _matching_bounds(idx: PathIndex) -> list[int]:
    """Greedy maximal matching size on the edges inside each subtree (a cover lower bound)."""
    g = idx.g
    lb = [0] * (g.n + 1)
    for x in idx.td.postorder():
        inside = set(idx.td.subtree(x))
        used: set[int] = set()
        size = 0
        for u in sorted(inside):
            if u in used:
                continue
            for w in sorted(g.adj[u]):
                if w in inside and w not in used and w != u:
                    used.update((u, w))
                    size += 1
                    break
        lb[x] = size
    return lb


def vc_branch(g: Graph, td: TreedepthDecomposition | None = None, bnb: bool = False,
              stats: SolveStats | None = None) -> int:
    """Minimum vertex cover size by branching on each node top-down.

    A node may stay out of the cover only if all its ancestor neighbours are
    in; the out-branch is explored first. With ``bnb`` the in-branch is skipped
    when a matching lower bound shows it cannot beat the out-branch.
    """
    if g.n == 0:
        return 0
    idx = _prepare(g, td)
    st = stats if stats is not None else SolveStats("vc-branch")
    t0 = time.perf_counter()
    lb = _matching_bounds(idx) if bnb else None

    def cover(x: int, inmask: int) -> int:
        st.enter()
        try:
            bit = 1 << idx.pos[x]
            kids = idx.children[x]
            best = None
            if idx.up[x] & ~inmask == 0:
                best = sum(cover(y, inmask) for y in kids)
            if best is not None and lb is not None and best <= 1 + sum(lb[y] for y in kids):
                return best
            take = 1 + sum(cover(y, inmask | bit) for y in kids)
            return take if best is None else min(best, take)
        finally:
            st.leave()

    answer = cover(idx.td.root, 0)
    st.answer = answer
    st.wall_time_ms = (time.perf_counter() - t0) * 1000
    return answer


# classic Dominating Set DP ---------------------------------------------------

FREE, REQ, IN = 0, 1, 2


def _subset_sums(weights: list[int]) -> np.ndarray:
    out = np.zeros(1 << len(weights), dtype=np.int64)
    for j, w in enumerate(weights):
        out.reshape(-1, 2, 1 << j)[:, 1, :] += w
    return out


def _mask_positions(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if mask >> j & 1)


class ClassicDP:
    """Bottom-up Dominating Set DP with labels {free, required, in-set}.

    A node's table assigns one label to each relevant ancestor (those adjacent
    to the subtree) and stores the least number of subtree vertices that
    dominate the subtree and every ``required`` ancestor, given that the
    ``in-set`` ancestors are in the dominating set. Before its own label is
    forgotten, a node holds ``3^(k+1)`` entries for ``k`` relevant ancestors.
    Children are joined by distributing the required ancestors among them
    (a subset convolution per in-set pattern).
    """

    def __init__(self, g: Graph, td: TreedepthDecomposition, conv_mode: str = "naive",
                 stats: SolveStats | None = None):
        self.idx = PathIndex(g, td)
        self.conv_mode = conv_mode
        self.stats = stats if stats is not None else SolveStats("classic-dp")

    def solve(self) -> int:
        idx = self.idx
        st = self.stats
        if idx.td.n == 0:
            return 0
        tables: dict[int, np.ndarray] = {}
        for x in idx.td.postorder():
            st.branch_nodes_visited += 1
            tables[x] = self._node(x, tables)
            for y in idx.children[x]:
                st.free(tables[y].size)
                del tables[y]
        return int(tables[idx.td.root][0])

    def _slice(self, y: int, table: np.ndarray, dmask: int, universe: tuple[int, ...]) -> np.ndarray:
        """Child values for in-set ancestors ``dmask``, lifted to ``universe``."""
        ry = _mask_positions(self.idx.reach[y])
        pos3 = {p: 3 ** j for j, p in enumerate(ry)}
        base = sum(IN * pos3[p] for p in ry if dmask >> p & 1)
        rest = tuple(p for p in ry if not dmask >> p & 1)
        vals = table[base + _subset_sums([REQ * pos3[p] for p in rest])]
        return lift(CostTable.from_values(rest, vals), universe)

    def _join(self, children, tables, dmask: int, universe: tuple[int, ...]) -> np.ndarray:
        acc = None
        for y in children:
            lifted = self._slice(y, tables[y], dmask, universe)
            if acc is None:
                acc = lifted
            else:
                acc = convolve(CostTable.from_values(universe, acc),
                               CostTable.from_values(universe, lifted),
                               self.conv_mode, self.stats).values()
        return acc

    def _node(self, x: int, tables) -> np.ndarray:
        idx = self.idx
        st = self.stats
        rx = _mask_positions(idx.reach[x])
        k = len(rx)
        px = idx.pos[x]
        xbit = 1 << px
        kids = idx.children[x]
        # label of x is the last (most significant) base-3 digit
        full = np.full(3 ** (k + 1), BIG, dtype=np.int64)
        st.alloc(full.size)
        pos3 = [3 ** j for j in range(k)]
        xw = 3 ** k
        for imask in range(1 << k):
            dset = 0
            for j in range(k):
                if imask >> j & 1:
                    dset |= 1 << rx[j]
            rest = tuple(rx[j] for j in range(k) if not imask >> j & 1)
            base = sum(IN * pos3[j] for j in range(k) if imask >> j & 1)
            req = _subset_sums([REQ * pos3[rx.index(p)] for p in rest])
            n = 1 << len(rest)
            # x in the set
            if kids:
                m2 = self._join(kids, tables, dset | xbit, rest)
            else:
                m2 = np.zeros(n, dtype=np.int64)
            served = 0
            for j, p in enumerate(rest):
                if idx.up[x] >> p & 1:
                    served |= 1 << j
            take = m2[np.arange(n) & ~served] + 1
            full[IN * xw + base + req] = np.minimum(take, BIG)
            # x out of the set
            if kids:
                wide = tuple(sorted(rest + (px,)))
                m1 = self._join(kids, tables, dset, wide).reshape(-1, 2, 1 << wide.index(px))
                by_kids, no_need = m1[:, 1, :].reshape(-1), m1[:, 0, :].reshape(-1)
            else:
                by_kids = np.full(n, BIG, dtype=np.int64)
                no_need = np.full(n, BIG, dtype=np.int64)
                no_need[0] = 0
            full[REQ * xw + base + req] = by_kids
            if idx.up[x] & dset:
                full[FREE * xw + base + req] = no_need
        st.total_convolution_element_ops += full.size
        out = full.reshape(3, -1).min(axis=0)
        st.alloc(out.size)
        st.free(full.size)
        return out


def domset_classic_dp(g: Graph, td: TreedepthDecomposition | None = None,
                      stats: SolveStats | None = None, conv_mode: str = "naive") -> int:
    if td is None:
        td = dfs_decomposition(g)
    t0 = time.perf_counter()
    dp = ClassicDP(g, td, conv_mode, stats)
    answer = dp.solve()
    dp.stats.answer = answer
    dp.stats.wall_time_ms = (time.perf_counter() - t0) * 1000
    return answer


# exhaustive oracles ------------------------------------------------------------

ORACLE_MAX_N = 20
ORACLE_3COL_MAX_N = 15


def _closed_masks(g: Graph) -> list[int]:
    out = []
    for v in g.vertices():
        m = 1 << (v - 1)
        for w in g.adj[v]:
            m |= 1 << (w - 1)
        out.append(m)
    return out


def oracle_domset(g: Graph) -> int:
    """Domination number by trying vertex subsets in order of size."""
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    full = (1 << g.n) - 1
    nb = _closed_masks(g)
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            m = 0
            for v in combo:
                m |= nb[v]
            if m == full:
                return k
    raise AssertionError("unreachable")


def oracle_vc(g: Graph) -> int:
    """Minimum vertex cover size by trying vertex subsets in order of size."""
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    edges = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in g.edges()]
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            m = 0
            for v in combo:
                m |= 1 << v
            if all(e & m for e in edges):
                return k
    raise AssertionError("unreachable")


def oracle_3col(g: Graph, max_n: int = ORACLE_3COL_MAX_N) -> bool:
    """3-colourability by backtracking over vertices in id order."""
    if g.n > max_n:
        raise ValueError(f"oracle limited to n <= {max_n}")
    color = [0] * (g.n + 1)

    def go(v: int) -> bool:
        if v > g.n:
            return True
        for c in (1, 2, 3):
            if all(color[w] != c for w in g.adj[v] if w < v):
                color[v] = c
                if go(v + 1):
                    return True
        color[v] = 0
        return False

    return go(1)
