"""Pure branching Dominating Set solver.

A call on node ``x`` receives the ancestors ``D`` already in the dominating set
and the ancestors ``P`` that must be dominated from inside the subtree at ``x``.
It guesses whether ``x`` is taken, then tries every partition of the vertices
still to be served into blocks, each block to be dominated from a different
child subtree. Per block it keeps a short list of the cheapest children (by
extra cost over that child's baseline) and picks an injective assignment of
blocks to children by min-cost matching.
"""

from __future__ import annotations

import sys
import time
from bisect import insort
from itertools import permutations
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Graph
from .stats import INF, SolveStats
from .treedepth import PathIndex, TreedepthDecomposition, dfs_decomposition


def _rgs_masks(bits: Sequence[int], max_blocks: int | None = None,
               admissible: Callable[[int], bool] | None = None) -> Iterator[list[int]]:
    """Set partitions of ``bits`` (one-bit masks) as block masks, in restricted-growth order.

    Item i goes to an existing block or opens the next one, trying block
    indices in increasing order. Partial blocks rejected by ``admissible`` are
    pruned together with every partition extending them.
    """
    n = len(bits)
    if n == 0:
        yield []
        return
    limit = n if max_blocks is None else min(n, max_blocks)
    blocks: list[int] = []

    def place(i: int):
        if i == n:
            yield list(blocks)
            return
        b = bits[i]
        for k in range(len(blocks)):
            merged = blocks[k] | b
            if admissible is None or admissible(merged):
                blocks[k] = merged
                yield from place(i + 1)
                blocks[k] ^= b
        if len(blocks) < limit and (admissible is None or admissible(b)):
            blocks.append(b)
            yield from place(i + 1)
            blocks.pop()

    yield from place(0)


def enumerate_partitions(items: Sequence, max_blocks: int | None = None) -> Iterator[list[list]]:
    """Every set partition of ``items`` exactly once, in restricted-growth-string order.

    Blocks are numbered by first appearance, so ``[[a, c], [b]]`` corresponds
    to the string 0 1 0.
    """
    items = list(items)
    bits = [1 << i for i in range(len(items))]
    for masks in _rgs_masks(bits, max_blocks):
        yield [[items[i] for i in range(len(items)) if m >> i & 1] for m in masks]


def find_min_solution(lists: Sequence[Sequence[tuple[float, int]]]) -> float:
    """Cheapest assignment of blocks to pairwise distinct children.

    ``lists[i]`` holds ``(extra_cost, child)`` candidates for block ``i``;
    children not listed for a block cannot serve it. Returns ``INF`` when no
    injective assignment exists.
    """
    if not lists:
        return 0
    if any(not lst for lst in lists):
        return INF
    if len(lists) == 1:
        return min(c for c, _ in lists[0])
    kids = sorted({y for lst in lists for _, y in lst})
    if len(kids) < len(lists):
        return INF
    col = {y: j for j, y in enumerate(kids)}
    big = 1 + sum(max(c for c, _ in lst) for lst in lists)
    cost = np.full((len(lists), len(kids)), big, dtype=np.int64)
    for i, lst in enumerate(lists):
        for c, y in lst:
            cost[i, col[y]] = min(cost[i, col[y]], c)
    rows, cols = linear_sum_assignment(cost)
    chosen = cost[rows, cols]
    if np.any(chosen >= big):
        return INF
    return int(chosen.sum())


def find_min_solution_brute(lists: Sequence[Sequence[tuple[float, int]]]) -> float:
    """Exhaustive counterpart of :func:`find_min_solution` for small inputs."""
    if not lists:
        return 0
    table = [{y: c for c, y in sorted(lst, reverse=True)} for lst in lists]
    kids = sorted({y for t in table for y in t})
    best = INF
    for perm in permutations(kids, len(lists)):
        total = 0
        for t, y in zip(table, perm):
            if y not in t:
                break
            total += t[y]
        else:
            best = min(best, total)
    return best


class BranchSolver:
    """State of one branching solve.

    ``memo`` caches results by ``(x, P, D & reach[x])`` after dropping from
    ``P`` everything ``D`` already dominates; the recursion itself is unchanged.
    Without it the solver keeps only the frames on the current root path.
    """

    def __init__(self, g: Graph, td: TreedepthDecomposition, memo: bool = True,
                 stats: SolveStats | None = None, cap_extra: bool = True):
        self.idx = PathIndex(g, td)
        self.td = td
        self.memo: dict | None = {} if memo else None
        self.stats = stats if stats is not None else SolveStats("branch")
        self.cap_extra = cap_extra
        self.frames_checked = 0

    def solve(self) -> int:
        if self.td.n == 0:
            return 0
        limit = self.td.depth * 3 + 100
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)
        return self.rec(self.td.root, 0, 0)

    def rec(self, x: int, pmask: int, dmask: int) -> float:
        """Least number of subtree vertices dominating the subtree and ``P``, given ``D``."""
        idx = self.idx
        pmask &= ~idx.dominated(x, dmask)
        if pmask & ~idx.reach[x]:
            return INF
        key = (x, pmask, dmask & idx.reach[x])
        if self.memo is not None:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        st = self.stats
        st.enter()
        try:
            if idx.children[x]:
                out = self._internal(x, pmask, dmask)
            else:
                out = self._leaf(x, pmask, dmask)
        finally:
            st.leave()
        if self.memo is not None:
            self.memo[key] = out
        return out

    def _leaf(self, x: int, pmask: int, dmask: int) -> float:
        if not idx_up_hits(self.idx, x, dmask) or pmask:
            # x must be taken; it then has to serve the whole of P
            return INF if pmask & ~self.idx.up[x] else 1
        return 0

    def _internal(self, x: int, pmask: int, dmask: int) -> float:
        idx = self.idx
        st = self.stats
        kids = idx.children[x]
        reach = [idx.reach[y] for y in kids]
        xbit = 1 << idx.pos[x]

        def admissible(block: int) -> bool:
            return any(block & ~r == 0 for r in reach)

        result = INF
        for dm, own in ((dmask, 0), (dmask | xbit, 1)):
            todo = (pmask | xbit) & ~idx.dominated(x, dm)
            bits = [1 << p for p in range(todo.bit_length()) if todo >> p & 1]
            for blocks in _rgs_masks(bits, len(kids), admissible):
                st.partitions_enumerated += 1
                l = len(blocks)
                sizes = [bin(b).count("1") for b in blocks]
                lists: list[list[tuple[int, int]]] = [[] for _ in blocks]
                baseline = 0
                for y in kids:
                    b = self.rec(y, 0, dm)
                    baseline += b
                    for i, s in enumerate(blocks):
                        c = self.rec(y, s, dm) - b
                        if self.cap_extra and c > sizes[i]:
                            continue
                        if c == INF:
                            continue
                        insort(lists[i], (c, y))
                        if len(lists[i]) > l:
                            lists[i].pop()
                self._check_frame(lists, sizes)
                if baseline == INF:
                    continue
                result = min(result, find_min_solution(lists) + baseline + own)
        return result

    def _check_frame(self, lists, sizes) -> None:
        self.frames_checked += 1
        l = len(lists)
        entries = sum(len(lst) for lst in lists)
        st = self.stats
        if entries > l * l:
            st.violation(f"{entries} list entries for {l} blocks")
        if len({y for lst in lists for _, y in lst}) > l * l:
            st.violation("more than l^2 distinct candidate children")
        if self.cap_extra:
            for lst, s in zip(lists, sizes):
                if any(c > s for c, _ in lst):
                    st.violation("stored extra cost exceeds block size")
        if st.peak_recursion_depth > self.td.depth + 1:
            st.violation("recursion deeper than decomposition depth + 1")


def idx_up_hits(idx: PathIndex, x: int, dmask: int) -> bool:
    """Whether ``x`` has a neighbour among the ancestors in ``dmask``."""
    return bool(idx.up[x] & dmask)


def _positions_mask(td: TreedepthDecomposition, x: int, vertices, allow_x: bool) -> int:
    m = 0
    for v in vertices:
        if v == x and allow_x:
            pass
        elif not td.is_ancestor(v, x):
            raise ValueError(f"{v} is not an ancestor of {x}")
        m |= 1 << td.position(v)
    return m


def domset_rec(g: Graph, td: TreedepthDecomposition, x: int, P=(), D=(),
               memo: bool = True, cap_extra: bool = True) -> float:
    """One recursive call on node ``x``.

    ``D`` lists ancestors of ``x`` assumed in the dominating set and ``P``
    ancestors (or ``x`` itself, which is implied anyway) to be dominated from
    inside the subtree at ``x``.
    """
    solver = BranchSolver(g, td, memo=memo, cap_extra=cap_extra)
    pmask = _positions_mask(td, x, P, True) & ~(1 << td.position(x))
    return solver.rec(x, pmask, _positions_mask(td, x, D, False))


def solve_branch(g: Graph, td: TreedepthDecomposition | None = None, *, memo: bool = True,
                 stats: SolveStats | None = None) -> int:
    """Domination number of ``g`` by the pure branching algorithm."""
    if td is None:
        td = dfs_decomposition(g)
    t0 = time.perf_counter()
    solver = BranchSolver(g, td, memo=memo, stats=stats)
    answer = solver.solve()
    solver.stats.answer = answer
    solver.stats.wall_time_ms = (time.perf_counter() - t0) * 1000
    return answer
