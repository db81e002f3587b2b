"""Hybrid branching / subset-table solver for Dominating Set.

Each call on a node ``x`` with a set ``D`` of root-path vertices already in the
dominating set returns a table over the undominated ancestors that some vertex
below ``x`` can reach: ``M[S]`` is the least number of vertices of the subtree
at ``x`` that dominate the whole subtree plus ``S``. Child tables are merged by
min-plus subset convolution, once with ``x`` left out and once with ``x`` taken.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from .graph import Graph
from .stats import SolveStats
from .tables import BIG, CostTable, convolve, lift
from .treedepth import PathIndex, TreedepthDecomposition, dfs_decomposition


def _positions(mask: int) -> tuple[int, ...]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


class HybridSolver:
    """One solve of the hybrid algorithm; owns its counters and optional cache.

    With ``memo`` set, tables are cached by ``(x, D & reach[x])``; only that part
    of ``D`` influences the subtree, so the cache is exact. Without it every
    branch recomputes its subtables and the only live tables are those on the
    current root path.
    """

    def __init__(self, g: Graph, td: TreedepthDecomposition, conv_mode: str = "fast",
                 memo: bool = True, stats: SolveStats | None = None, check: bool = True):
        if conv_mode not in ("naive", "fast"):
            raise ValueError(f"unknown convolution mode {conv_mode!r}")
        self.idx = PathIndex(g, td)
        self.td = td
        self.conv_mode = conv_mode
        self.memo: dict[tuple[int, int], CostTable] | None = {} if memo else None
        self.stats = stats if stats is not None else SolveStats(f"hybrid-{conv_mode}")
        self.check = check
        self.tables_checked = 0

    def solve(self) -> int:
        if self.td.n == 0:
            return 0
        limit = self.td.depth * 3 + 100
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)
        m = self.table(self.td.root, 0)
        return m[()]

    def table(self, x: int, dmask: int) -> CostTable:
        """Cost table of the subtree at ``x`` given ancestor positions ``dmask`` in the set."""
        idx = self.idx
        d = dmask & idx.reach[x]
        if self.memo is not None:
            hit = self.memo.get((x, d))
            if hit is not None:
                return hit
        st = self.stats
        st.enter()
        try:
            out = self._compute(x, d)
        finally:
            st.leave()
        if self.check:
            self._check(out, x, d)
        if self.memo is not None:
            self.memo[(x, d)] = out
            st.alloc(len(out))
        return out

    def _check(self, m: CostTable, x: int, d: int) -> None:
        self.tables_checked += 1
        st = self.stats
        free = self.td.depth - bin(d).count("1")
        if len(m) > 1 << m.u or m.u > free:
            st.violation(f"table at {x} has {len(m)} entries over universe {m.u}")
        bad = m.offset_violations()
        if bad:
            st.violation(f"table at {x} has {bad} offsets outside [0, |S|]")
        if st.peak_recursion_depth > self.td.depth + 1:
            st.violation("recursion deeper than decomposition depth + 1")

    def _compute(self, x: int, d: int) -> CostTable:
        idx = self.idx
        st = self.stats
        universe = _positions(idx.reach[x] & ~d)
        children = idx.children[x]
        if not children:
            # leaf: taking x costs 1 and serves every subset of its undominated ancestors
            vals = np.ones(1 << len(universe), dtype=np.int64)
            if idx.up[x] & d:
                vals[0] = 0
            st.alloc(len(vals))
            st.free(len(vals))
            return CostTable.from_values(universe, vals)

        xbit = 1 << idx.pos[x]
        wide = _positions((idx.reach[x] | xbit) & ~d)
        # x left out: x itself joins the universe and must be dominated from below unless D does it
        m1 = self._merge_children(children, d, wide)
        if not idx.up[x] & d:
            j = wide.index(idx.pos[x])
            m1.reshape(-1, 2, 1 << j)[:, 0, :] = BIG
        j = wide.index(idx.pos[x])
        v1 = m1.reshape(-1, 2, 1 << j)
        out1 = np.minimum(v1[:, 0, :], v1[:, 1, :]).reshape(-1)
        # x taken: children see x in D, and x dominates its ancestor neighbours
        m2 = self._merge_children(children, d | xbit, universe)
        served = 0
        for k, p in enumerate(universe):
            if idx.up[x] >> p & 1:
                served |= 1 << k
        sel = np.arange(1 << len(universe), dtype=np.int64) & ~served
        out2 = m2[sel] + 1
        result = np.minimum(out1, out2)
        result[result >= BIG] = BIG
        st.free(len(m1) + len(m2))
        return CostTable.from_values(universe, result)

    def _merge_children(self, children, dmask: int, universe: tuple[int, ...]) -> np.ndarray:
        st = self.stats
        acc = None
        st.alloc(1 << len(universe))
        for y in children:
            child = self.table(y, dmask)
            if self.memo is None:
                st.alloc(len(child))
            lifted = lift(child, universe)
            if acc is None:
                acc = lifted
            else:
                merged = convolve(CostTable.from_values(universe, acc),
                                  CostTable.from_values(universe, lifted),
                                  self.conv_mode, st)
                acc = merged.values()
            if self.memo is None:
                st.free(len(child))
        return acc


def domset_table(g: Graph, td: TreedepthDecomposition, x: int, dset=(),
                 conv_mode: str = "fast") -> CostTable:
    """Table of the subtree at ``x`` given the ancestors ``dset`` are in the dominating set.

    The universe lists the depth positions of the ancestors that are not in
    ``dset`` and have a neighbour in the subtree; other subsets cost infinity.
    """
    solver = HybridSolver(g, td, conv_mode, memo=False)
    pos = solver.idx.pos
    dmask = 0
    for v in dset:
        if not td.is_ancestor(v, x):
            raise ValueError(f"{v} is not an ancestor of {x}")
        dmask |= 1 << pos[v]
    return solver.table(x, dmask)


def solve_hybrid(g: Graph, td: TreedepthDecomposition | None = None, conv_mode: str = "fast",
                 *, memo: bool = True, stats: SolveStats | None = None) -> int:
    """Domination number of ``g`` by the hybrid branching / table algorithm."""
    if td is None:
        td = dfs_decomposition(g)
    t0 = time.perf_counter()
    solver = HybridSolver(g, td, conv_mode, memo=memo, stats=stats)
    answer = solver.solve()
    solver.stats.answer = answer
    solver.stats.wall_time_ms = (time.perf_counter() - t0) * 1000
    return answer
