"""Subset cost tables with offset encoding, and the operations that merge them.

A table maps every subset S of an ordered universe of root-path positions to a
cost (or infinity). Subsets are bitmasks: bit j stands for ``universe[j]``.
Storage is dense: ``2**u`` unsigned bytes holding ``cost - base``, with
``INF_CODE`` marking infinity. ``base`` is the smallest finite cost, which is
the cost at the empty set whenever the table is superset-monotone.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
from scipy import fft as sfft

from .stats import INF

INF_CODE = 255
# working value for infinity in int64 arithmetic; sums of two stay far below overflow
BIG = 1 << 40


class CostTable:
    __slots__ = ("universe", "base", "offsets")

    def __init__(self, universe: Iterable[int], base: int, offsets: np.ndarray):
        self.universe = tuple(universe)
        self.base = int(base)
        self.offsets = offsets
        if offsets.shape != (1 << len(self.universe),):
            raise ValueError("offset array does not match universe size")

    # construction -------------------------------------------------------

    @classmethod
    def from_values(cls, universe: Iterable[int], values: np.ndarray) -> "CostTable":
        """Build from an int64 array of absolute costs where ``>= BIG`` means infinity."""
        universe = tuple(universe)
        values = np.asarray(values, dtype=np.int64)
        finite = values < BIG
        if not finite.any():
            return cls(universe, 0, np.full(values.shape, INF_CODE, dtype=np.uint8))
        base = int(values[finite].min())
        off = values - base
        if finite.any() and int(off[finite].max()) >= INF_CODE:
            raise OverflowError("offset does not fit the byte encoding")
        out = np.where(finite, off, INF_CODE).astype(np.uint8)
        return cls(universe, base, out)

    @classmethod
    def from_dict(cls, universe: Iterable[int], entries: Mapping) -> "CostTable":
        """Build from ``{subset: cost}``; subsets are iterables of universe elements."""
        universe = tuple(universe)
        vals = np.full(1 << len(universe), BIG, dtype=np.int64)
        for key, cost in entries.items():
            if cost == INF:
                continue
            vals[subset_mask(universe, key)] = cost
        return cls.from_values(universe, vals)

    @classmethod
    def identity(cls, universe: Iterable[int] = ()) -> "CostTable":
        """The convolution identity: cost 0 at the empty set, infinity elsewhere."""
        universe = tuple(universe)
        off = np.full(1 << len(universe), INF_CODE, dtype=np.uint8)
        off[0] = 0
        return cls(universe, 0, off)

    # access ---------------------------------------------------------------

    @property
    def u(self) -> int:
        return len(self.universe)

    def __len__(self) -> int:
        return self.offsets.shape[0]

    def values(self) -> np.ndarray:
        """Absolute costs as int64, ``BIG`` for infinity."""
        v = self.offsets.astype(np.int64) + self.base
        v[self.offsets == INF_CODE] = BIG
        return v

    def __getitem__(self, key) -> float | int:
        i = subset_mask(self.universe, key)
        o = int(self.offsets[i])
        return INF if o == INF_CODE else self.base + o

    def to_dict(self) -> dict[frozenset, int]:
        """Finite entries as ``{frozenset of universe elements: cost}``."""
        out = {}
        for i in np.flatnonzero(self.offsets != INF_CODE):
            key = frozenset(self.universe[j] for j in range(self.u) if i >> j & 1)
            out[key] = self.base + int(self.offsets[i])
        return out

    def finite_count(self) -> int:
        return int(np.count_nonzero(self.offsets != INF_CODE))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CostTable):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(self.values(), other.values())

    def __repr__(self) -> str:
        items = sorted(self.to_dict().items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        body = ", ".join(f"{sorted(k)}: {v}" for k, v in items)
        return f"CostTable(universe={list(self.universe)}, {{{body}}})"

    # invariants -----------------------------------------------------------

    def offset_violations(self) -> int:
        """Finite entries outside ``M[{}] <= M[S] <= M[{}] + |S|``."""
        v = self.values()
        if v[0] >= BIG:
            return int(np.count_nonzero(v < BIG))
        finite = v < BIG
        off = v - v[0]
        bad = finite & ((off < 0) | (off > popcounts(self.u)))
        return int(np.count_nonzero(bad))

    def is_monotone(self) -> bool:
        """Whether ``M[S] <= M[S']`` for all ``S`` contained in ``S'``."""
        v = self.values()
        for j in range(self.u):
            w = v.reshape(-1, 2, 1 << j)
            if np.any(w[:, 0, :] > w[:, 1, :]):
                return False
        return True


def subset_mask(universe: tuple[int, ...], key) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key)
    idx = {p: j for j, p in enumerate(universe)}
    m = 0
    for p in key:
        if p not in idx:
            raise KeyError(f"{p} not in universe {list(universe)}")
        m |= 1 << idx[p]
    return m


@lru_cache(maxsize=None)
def popcounts(u: int) -> np.ndarray:
    c = np.zeros(1 << u, dtype=np.int64)
    for j in range(u):
        c.reshape(-1, 2, 1 << j)[:, 1, :] += 1
    c.setflags(write=False)
    return c


def _check_same(m1: CostTable, m2: CostTable) -> None:
    if m1.universe != m2.universe:
        raise ValueError(f"universe mismatch: {list(m1.universe)} vs {list(m2.universe)}")


# pointwise operations -------------------------------------------------------

def combine_choice(m1: CostTable, m2: CostTable) -> CostTable:
    """Pointwise minimum of two tables over the same universe."""
    _check_same(m1, m2)
    return CostTable.from_values(m1.universe, np.minimum(m1.values(), m2.values()))


def forget_vertex(m: CostTable, x: int) -> CostTable:
    """Drop ``x`` from the universe: ``new[S] = min(old[S], old[S + x])``."""
    if x not in m.universe:
        raise ValueError(f"{x} not in universe {list(m.universe)}")
    j = m.universe.index(x)
    v = m.values().reshape(-1, 2, 1 << j)
    out = np.minimum(v[:, 0, :], v[:, 1, :]).reshape(-1)
    return CostTable.from_values(m.universe[:j] + m.universe[j + 1:], out)


def monotone_closure(values: np.ndarray, u: int) -> np.ndarray:
    """``out[S] = min over supersets S' of values[S']`` (int64, in place on a copy)."""
    v = np.array(values, dtype=np.int64)
    for j in range(u):
        w = v.reshape(-1, 2, 1 << j)
        np.minimum(w[:, 0, :], w[:, 1, :], out=w[:, 0, :])
    return v


def embed_index(small: tuple[int, ...], big: tuple[int, ...]) -> np.ndarray:
    """Index in ``big``'s subset space of every subset of ``small`` (which must be contained in it)."""
    where = [big.index(p) for p in small]
    idx = np.zeros(1 << len(small), dtype=np.int64)
    for j, b in enumerate(where):
        idx.reshape(-1, 2, 1 << j)[:, 1, :] |= 1 << b
    return idx


def lift(m: CostTable, universe: tuple[int, ...]) -> np.ndarray:
    """Values of ``m`` over a larger universe; subsets reaching outside ``m.universe`` cost infinity."""
    out = np.full(1 << len(universe), BIG, dtype=np.int64)
    out[embed_index(m.universe, universe)] = m.values()
    return out


# convolution ----------------------------------------------------------------

NAIVE_BLOCK = 12


@lru_cache(maxsize=None)
def _split_pairs(u: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All ``(X, A)`` with ``A`` a subset of ``X``, grouped by ``X``; plus group starts."""
    n3 = 3 ** u
    digits = np.arange(n3, dtype=np.int64)
    x = np.zeros(n3, dtype=np.int64)
    a = np.zeros(n3, dtype=np.int64)
    for j in range(u):
        d = digits % 3
        digits //= 3
        x |= (d > 0).astype(np.int64) << j
        a |= (d == 1).astype(np.int64) << j
    order = np.argsort(x, kind="stable")
    x, a = x[order], a[order]
    starts = np.searchsorted(x, np.arange(1 << u))
    for arr in (x, a, starts):
        arr.setflags(write=False)
    return x, a, starts


def _naive_values(v1: np.ndarray, v2: np.ndarray, u: int) -> np.ndarray:
    if u <= NAIVE_BLOCK:
        x, a, starts = _split_pairs(u)
        cand = v1[a] + v2[x ^ a]
        return np.minimum.reduceat(cand, starts)
    # split off the high bits and enumerate their 3^k splits explicitly
    k = u - NAIVE_BLOCK
    low = 1 << NAIVE_BLOCK
    w1 = v1.reshape(1 << k, low)
    w2 = v2.reshape(1 << k, low)
    out = np.full((1 << k, low), BIG * 2, dtype=np.int64)
    for xh in range(1 << k):
        ah = xh
        while True:
            np.minimum(out[xh], _naive_values(w1[ah], w2[xh ^ ah], NAIVE_BLOCK), out=out[xh])
            if ah == 0:
                break
            ah = (ah - 1) & xh
    return out.reshape(-1)


def convolve_naive(m1: CostTable, m2: CostTable, stats=None) -> CostTable:
    """Min-plus subset convolution by enumerating every disjoint split ``A + B = X``."""
    _check_same(m1, m2)
    u = m1.u
    out = _naive_values(m1.values(), m2.values(), u)
    if stats is not None:
        stats.total_convolution_element_ops += 3 ** u
    return CostTable.from_values(m1.universe, np.where(out >= BIG, BIG, out))


def _zeta(f: np.ndarray, u: int) -> None:
    for j in range(u):
        w = f.reshape(-1, 2, 1 << j, *f.shape[1:])
        w[:, 1] += w[:, 0]


def _mobius(f: np.ndarray, u: int) -> None:
    for j in range(u):
        w = f.reshape(-1, 2, 1 << j, *f.shape[1:])
        w[:, 1] -= w[:, 0]


FFT_CHUNK = 4096


def _check_bounded(m: CostTable) -> None:
    fin = m.offsets != INF_CODE
    if fin.any() and int(m.offsets[fin].max()) > m.u:
        raise ValueError("offset exceeds universe size; fast convolution needs bounded offsets")


def _lowest_degree(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nz = h != 0
    return nz.any(axis=1), np.argmax(nz, axis=1)


def _cover_product(m1: CostTable, m2: CostTable, stats=None) -> np.ndarray:
    # monotone tables: min over covers A | B = X equals min over disjoint splits
    u = m1.u
    n = 1 << u
    r = u + 1
    fs = []
    for m in (m1, m2):
        f = np.zeros((n, r), dtype=np.int64)
        fin = np.flatnonzero(m.offsets != INF_CODE)
        f[fin, m.offsets[fin].astype(np.int64)] = 1
        _zeta(f, u)
        fs.append(f)
    f1, f2 = fs
    h = np.zeros((n, 2 * r - 1), dtype=np.int64)
    for v in range(r):
        h[:, v:v + r] += f1[:, v:v + 1] * f2
    _mobius(h, u)
    if stats is not None:
        stats.total_convolution_element_ops += n * r * r
    has, first = _lowest_degree(h)
    return np.where(has, first + m1.base + m2.base, BIG)


def _ranked_product(m1: CostTable, m2: CostTable, stats=None) -> np.ndarray:
    u = m1.u
    n = 1 << u
    ranks = popcounts(u)
    r = u + 1
    fs = []
    for m in (m1, m2):
        f = np.zeros((n, r, r), dtype=np.int64)
        fin = np.flatnonzero(m.offsets != INF_CODE)
        f[fin, ranks[fin], m.offsets[fin].astype(np.int64)] = 1
        _zeta(f, u)
        fs.append(f)
    f1, f2 = fs
    side = sfft.next_fast_len(2 * r - 1, real=True)
    shape = (side, side)
    h = np.empty((n, r, 2 * r - 1), dtype=np.int64)
    for lo in range(0, n, FFT_CHUNK):
        hi = min(n, lo + FFT_CHUNK)
        p = sfft.rfft2(f1[lo:hi], s=shape) * sfft.rfft2(f2[lo:hi], s=shape)
        prod = sfft.irfft2(p, s=shape)
        h[lo:hi] = np.rint(prod[:, :r, : 2 * r - 1])
    _mobius(h, u)
    if stats is not None:
        stats.total_convolution_element_ops += n * r * r * r
    has, first = _lowest_degree(h[np.arange(n), ranks])
    return np.where(has, first + m1.base + m2.base, BIG)


def convolve_fast(m1: CostTable, m2: CostTable, stats=None) -> CostTable:
    """Min-plus subset convolution through zeta/Moebius transforms.

    Finite offsets become monomials ``y^o`` and the answer at ``X`` is the
    lowest ``y``-degree with a nonzero coefficient after the transforms.
    Superset-monotone inputs go through the cover product (no rank axis);
    anything else uses the ranked transform, which tags subsets with
    ``z^|A|`` so that only disjoint splits survive. Offsets must lie in
    ``0..u``.
    """
    _check_same(m1, m2)
    _check_bounded(m1)
    _check_bounded(m2)
    if m1.is_monotone() and m2.is_monotone():
        vals = _cover_product(m1, m2, stats)
    else:
        vals = _ranked_product(m1, m2, stats)
    return CostTable.from_values(m1.universe, vals)


def convolve(m1: CostTable, m2: CostTable, mode: str = "fast", stats=None) -> CostTable:
    if mode == "naive" or m1.u <= 2:
        return convolve_naive(m1, m2, stats)
    if mode == "fast":
        return convolve_fast(m1, m2, stats)
    raise ValueError(f"unknown convolution mode {mode!r}")
