"""Boundaried gadget families with certified answers.

Each family fixes a boundary X = {1..s}. An *enforcer* H pins the boundary
into one state in any optimal solution, a *tester* glued next to it either
breaks the instance or costs one extra vertex when it recognises that state,
and a family instance glues the testers for a chosen subset I with the
enforcer of a probe. The expected answer follows from budget accounting and is
confirmed by running a solver at construction time.

Circuit gadgets are two-input, one-output widgets arranged in a binary tree
over a set of boundary vertices; the top output summarises the whole set.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .graph import BoundariedGraph, Graph, glue_all, write_graph
from .treedepth import TreedepthDecomposition, validate, write_decomposition

DEBUG = bool(os.environ.get("TDSOLVE_DEBUG"))


# specs -----------------------------------------------------------------------

def _check_cover(parts: Sequence[Sequence[int]], s: int | None) -> int:
    flat = [v for p in parts for v in p]
    n = len(flat) if s is None else s
    if sorted(flat) != list(range(1, n + 1)):
        raise ValueError(f"classes {parts} do not partition 1..{n}")
    return n


@dataclass(frozen=True)
class ColorPartitionSpec:
    """Three disjoint colour classes covering the boundary labels 1..s."""

    R: tuple[int, ...]
    G: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        for name in "RGB":
            object.__setattr__(self, name, tuple(sorted(getattr(self, name))))
        _check_cover(self.classes(), None)

    @property
    def s(self) -> int:
        return len(self.R) + len(self.G) + len(self.B)

    def classes(self) -> tuple[tuple[int, ...], ...]:
        return (self.R, self.G, self.B)

    def key(self) -> frozenset:
        """The partition itself, forgetting which class carries which colour."""
        return frozenset(frozenset(c) for c in self.classes() if c)

    def to_json(self) -> dict:
        return {"R": list(self.R), "G": list(self.G), "B": list(self.B)}


@dataclass(frozen=True)
class DsPartitionSpec:
    """Boundary split into equal thirds: B in the set, D dominated by H, W dominated from outside."""

    B: tuple[int, ...]
    D: tuple[int, ...]
    W: tuple[int, ...]

    def __post_init__(self):
        for name in "BDW":
            object.__setattr__(self, name, tuple(sorted(getattr(self, name))))
        s = _check_cover((self.B, self.D, self.W), None)
        if s % 3 or not len(self.B) == len(self.D) == len(self.W):
            raise ValueError("B, D and W must each hold a third of the boundary")

    @property
    def s(self) -> int:
        return 3 * len(self.B)

    def to_json(self) -> dict:
        return {"B": list(self.B), "D": list(self.D), "W": list(self.W)}


VcSpec = tuple  # sorted tuple of boundary labels A


def vc_spec(A: Iterable[int], s: int) -> VcSpec:
    a = tuple(sorted(set(A)))
    if any(not 1 <= v <= s for v in a):
        raise ValueError(f"{a} is not a subset of 1..{s}")
    return a


def color_specs(s: int) -> list[ColorPartitionSpec]:
    """One spec per partition of 1..s into at most three classes (colour permutations identified)."""
    out = []
    seen = set()
    for labels in product(range(3), repeat=s):
        classes = [tuple(v + 1 for v in range(s) if labels[v] == c) for c in range(3)]
        spec = ColorPartitionSpec(*sorted(classes, key=lambda c: (not c, c)))
        if spec.key() not in seen:
            seen.add(spec.key())
            out.append(spec)
    return out


def vc_specs(s: int) -> list[VcSpec]:
    return [a for k in range(s + 1) for a in combinations(range(1, s + 1), k)]


def ds_specs(s: int) -> list[DsPartitionSpec]:
    if s % 3:
        raise ValueError("s must be divisible by 3")
    t = s // 3
    X = range(1, s + 1)
    out = []
    for B in combinations(X, t):
        rest = [v for v in X if v not in B]
        for D in combinations(rest, t):
            out.append(DsPartitionSpec(B, D, tuple(v for v in rest if v not in D)))
    return out


# construction helpers --------------------------------------------------------

class GadgetBuilder:
    """Growing graph whose first ``s`` vertices are the boundary 1..s."""

    def __init__(self, s: int):
        self.s = s
        self.n = s
        self.edges: list[tuple[int, int]] = []

    def vertex(self) -> int:
        self.n += 1
        return self.n

    def edge(self, u: int, v: int) -> None:
        if u != v:
            self.edges.append((u, v))

    def pendants(self, v: int, k: int) -> None:
        for _ in range(k):
            self.edge(v, self.vertex())

    def k2(self) -> None:
        self.edge(self.vertex(), self.vertex())

    def boundaried(self) -> BoundariedGraph:
        return BoundariedGraph(Graph(self.n, self.edges), tuple(range(1, self.s + 1)))


Circuit = Callable[[GadgetBuilder, int, int], int]


def circuit_tree(b: GadgetBuilder, inputs: Sequence[int], circuit: Circuit) -> tuple[int, int]:
    """Binary tree of circuits over ``inputs``; returns ``(top output, circuits used)``.

    Inputs are paired in the given order; an odd one out (the last) is paired
    with itself. Layers repeat on the outputs until one circuit remains.
    """
    if not inputs:
        raise ValueError("circuit tree needs at least one input")
    layer = list(inputs)
    used = 0
    while True:
        pairs = [(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            pairs.append((layer[-1], layer[-1]))
        layer = [circuit(b, v1, v2) for v1, v2 in pairs]
        used += len(pairs)
        if len(layer) == 1:
            return layer[0], used


def circuits_for(k: int) -> int:
    """Number of circuits :func:`circuit_tree` spends on ``k`` inputs."""
    used = 0
    while True:
        k = (k + 1) // 2
        used += k
        if k == 1:
            return used


def boundary_chain_decomposition(bg: BoundariedGraph) -> TreedepthDecomposition:
    """Decomposition with the boundary as a chain on top and the rest split by separators.

    Below the chain every component of the graph minus the boundary is
    decomposed by repeatedly removing the vertex that leaves the smallest
    largest component (ties to the smaller id), which is logarithmic on trees.
    """
    g = bg.graph
    if not bg.boundary:
        raise ValueError("need a nonempty boundary")
    parent = [0] * (g.n + 1)
    for prev, v in zip(bg.boundary, bg.boundary[1:]):
        parent[v] = prev
    rest = set(bg.internal())

    def components(verts: set[int]) -> list[list[int]]:
        left = set(verts)
        out = []
        while left:
            start = min(left)
            comp = [start]
            left.discard(start)
            i = 0
            while i < len(comp):
                for w in g.adj[comp[i]]:
                    if w in left:
                        left.discard(w)
                        comp.append(w)
                i += 1
            out.append(sorted(comp))
        return out

    stack = [(c, bg.boundary[-1]) for c in components(rest)]
    while stack:
        comp, above = stack.pop()
        if len(comp) <= 2:
            cut = comp[0]
        else:
            cs = set(comp)
            cut = min(comp, key=lambda v: (max((len(c) for c in components(cs - {v})), default=0), v))
        parent[cut] = above
        stack.extend((c, cut) for c in components(set(comp) - {cut}))
    return TreedepthDecomposition(parent[1:])


# circuit gadgets -------------------------------------------------------------

def coloring_circuit(b: GadgetBuilder, v1: int, v2: int) -> int:
    """Equal inputs force the output to their colour; unequal inputs leave it free."""
    t1, t2, u = b.vertex(), b.vertex(), b.vertex()
    for e in ((v1, t1), (v2, t2), (t1, t2), (t1, u), (t2, u)):
        b.edge(*e)
    return u


def vc_circuit(b: GadgetBuilder, v1: int, v2: int) -> int:
    """Two internal cover vertices suffice, and can include the output iff an input is in the cover."""
    a, c, u = b.vertex(), b.vertex(), b.vertex()
    for e in ((v1, a), (v2, c), (a, c), (u, a), (u, c)):
        b.edge(*e)
    return u


def ds_circuit(b: GadgetBuilder, v1: int, v2: int) -> int:
    """Triangle z, q, u with a pendant e on z; both inputs attach to e.

    One internal pick always suffices ({z}); the output u alone suffices iff an
    input is in the dominating set (it then covers e), otherwise taking u costs
    a second pick. No minimum pick set contains e, so within budget the gadget
    never dominates its own inputs.
    """
    e, z, q, u = (b.vertex() for _ in range(4))
    for x in (v1, v2):
        b.edge(x, e)
    for x, y in ((e, z), (z, q), (q, u), (u, z)):
        b.edge(x, y)
    return u


DS_CIRCUIT_BUDGET = 1


def _internal_picks(bg: BoundariedGraph):
    inner = bg.internal()
    for r in range(len(inner) + 1):
        yield from combinations(inner, r)


def coloring_circuit_contract() -> bool:
    """Exhaustive check of :func:`coloring_circuit` for equal and for distinct inputs."""
    for same in (True, False):
        b = GadgetBuilder(1 if same else 2)
        u = coloring_circuit(b, 1, 1 if same else 2)
        g = b.boundaried().graph
        for c1, c2 in product(range(3), repeat=2):
            if same and c1 != c2:
                continue
            seen = set()
            for rest in product(range(3), repeat=g.n - b.s):
                col = [None, c1] + ([] if same else [c2]) + list(rest)
                if all(col[x] != col[y] for x, y in g.edges()):
                    seen.add(col[u])
            if seen != ({c1} if c1 == c2 else {0, 1, 2}):
                return False
    return True


def _input_cases():
    # (number of boundary inputs, v2 label, inputs in the solution)
    yield 1, 1, (False,)
    yield 1, 1, (True,)
    for st in product((False, True), repeat=2):
        yield 2, 2, st


def vc_circuit_contract() -> bool:
    """Two internal vertices are needed; a size-2 cover with the output exists iff an input is in."""
    for s, v2, status in _input_cases():
        b = GadgetBuilder(s)
        u = vc_circuit(b, 1, v2)
        bg = b.boundaried()
        inside = {v for v, on in zip(range(1, s + 1), status) if on}
        covers = [set(p) for p in _internal_picks(bg)
                  if all(x in inside or y in inside or x in p or y in p for x, y in bg.graph.edges())]
        low = min(len(c) for c in covers)
        with_u = any(len(c) == low and u in c for c in covers)
        if low != 2 or with_u != bool(inside):
            return False
    return True


def ds_circuit_contract() -> bool:
    """Budget-1 internal picks dominate the gadget; with the output among them iff an input is in.

    Also checks that no minimum pick set touches an input, with or without the
    output exempted from domination (an upper circuit may dominate it).
    """
    for s, v2, status in _input_cases():
        b = GadgetBuilder(s)
        u = ds_circuit(b, 1, v2)
        bg = b.boundaried()
        g = bg.graph
        inner = set(bg.internal())
        seeded = set()
        for v, on in zip(range(1, s + 1), status):
            if on:
                seeded |= g.adj[v]
        near_inputs = g.adj[1] | g.adj[v2]
        for need in (inner, inner - {u}):
            sols = [set(p) for p in _internal_picks(bg)
                    if need <= seeded.union(p, *(g.adj[x] for x in p))]
            low = min(len(p) for p in sols)
            if low != DS_CIRCUIT_BUDGET or any(len(p) == low and p & near_inputs for p in sols):
                return False
            if need == inner:
                with_u = min(len(p) for p in sols if u in p)
                if with_u != DS_CIRCUIT_BUDGET + (not any(status)):
                    return False
    return True


# enforcers and testers ---------------------------------------------------------

def coloring_enforcer(spec: ColorPartitionSpec) -> BoundariedGraph:
    """Triangle v_R, v_G, v_B with v_C joined to every boundary vertex outside C."""
    s = spec.s
    b = GadgetBuilder(s)
    tri = [b.vertex() for _ in range(3)]
    for x, y in combinations(tri, 2):
        b.edge(x, y)
    for v_c, cls in zip(tri, spec.classes()):
        for w in range(1, s + 1):
            if w not in cls:
                b.edge(v_c, w)
    return b.boundaried()


def _coloring_tester_into(b: GadgetBuilder, spec: ColorPartitionSpec) -> int:
    classes = [c for c in spec.classes() if c]
    tops = []
    used = 0
    for c in classes:
        top, k = circuit_tree(b, c, coloring_circuit)
        tops.append(top)
        used += k
    if len(tops) == 3:
        a = b.vertex()
        for t in tops:
            b.edge(a, t)
    elif len(tops) == 2:
        # an edge whose ends both see the two tops: uncolourable iff the tops differ
        a, a2 = b.vertex(), b.vertex()
        b.edge(a, a2)
        for t in tops:
            b.edge(a, t)
            b.edge(a2, t)
    else:
        # one class: the top equals the class colour iff the class is monochromatic
        b.edge(tops[0], classes[0][0])
    return used


def coloring_tester(spec: ColorPartitionSpec) -> BoundariedGraph:
    """Gamma_X: 3-colourable exactly when the boundary colouring does not induce the partition X."""
    b = GadgetBuilder(spec.s)
    _coloring_tester_into(b, spec)
    return b.boundaried()


def vc_enforcer(A: Iterable[int], s: int) -> tuple[BoundariedGraph, int]:
    """Boundary plus a matching partner for every vertex of A and s - |A| separate K2s; q = s."""
    A = vc_spec(A, s)
    b = GadgetBuilder(s)
    for v in A:
        b.pendants(v, 1)
    for _ in range(s - len(A)):
        b.k2()
    return b.boundaried(), s


def _vc_tester_into(b: GadgetBuilder, A: VcSpec) -> tuple[int, int]:
    """Add Gamma_A; returns its top vertex u' and the number of circuits.

    For A = X there is nothing to pair, so u' is a bare vertex: the tester can
    never include it within budget.
    """
    outside = [v for v in range(1, b.s + 1) if v not in A]
    if not outside:
        return b.vertex(), 0
    return circuit_tree(b, outside, vc_circuit)


def vc_tester(A: Iterable[int], s: int) -> tuple[BoundariedGraph, int, int]:
    """Gamma_A alone, with its top vertex and circuit count (its budget is twice that)."""
    b = GadgetBuilder(s)
    top, lam = _vc_tester_into(b, vc_spec(A, s))
    return b.boundaried(), top, lam


def ds_enforcer(spec: DsPartitionSpec) -> tuple[BoundariedGraph, int]:
    """Two pendants on every vertex of B, one shared attachment vertex with two pendants for D; q = s/3 + 1."""
    s = spec.s
    b = GadgetBuilder(s)
    for v in spec.B:
        b.pendants(v, 2)
    c = b.vertex()
    b.pendants(c, 2)
    for v in spec.D:
        b.edge(c, v)
    return b.boundaried(), s // 3 + 1


def ds_lambda(b: GadgetBuilder, D: Sequence[int]) -> tuple[int, int]:
    """Add Lambda_D: a circuit tree over D whose top output gets a new neighbour u'.

    Returns ``(u', circuits used)``.
    """
    top, used = circuit_tree(b, sorted(D), ds_circuit)
    u_prime = b.vertex()
    b.edge(top, u_prime)
    return u_prime, used


def ds_lambda_size(s: int) -> int:
    return circuits_for(s // 3)


def _ds_tester_into(b: GadgetBuilder, W: Sequence[int], d_sets: Sequence[Sequence[int]]) -> int:
    s = b.s
    t = s // 3
    lam = ds_lambda_size(s)
    slots = comb(2 * t, t)
    if not d_sets:
        k1, k2 = b.vertex(), b.vertex()
        b.edge(k1, k2)
        for w in W:
            b.edge(k1, w)
        padding = slots * DS_CIRCUIT_BUDGET * lam
    else:
        tops = []
        for D in d_sets:
            u_prime, used = ds_lambda(b, D)
            if used != lam:
                raise AssertionError("circuit count differs between D-sets")
            tops.append(u_prime)
        a, bb = b.vertex(), b.vertex()
        for u_prime in tops:
            b.edge(a, u_prime)
        b.edge(bb, a)
        for w in W:
            b.edge(bb, w)
        padding = (slots - len(d_sets)) * DS_CIRCUIT_BUDGET * lam
    for _ in range(padding):
        b.vertex()
    return lam


def ds_tester(W: Sequence[int], d_sets: Sequence[Sequence[int]], s: int) -> BoundariedGraph:
    """Gamma_W for the D-sets listed in ``d_sets`` (each disjoint from W)."""
    if s % 3:
        raise ValueError("s must be divisible by 3")
    b = GadgetBuilder(s)
    _ds_tester_into(b, W, [tuple(sorted(d)) for d in d_sets])
    return b.boundaried()


# certified family instances ----------------------------------------------------

@dataclass
class CertifiedInstance:
    problem: str
    s: int
    graph: Graph
    decomposition: TreedepthDecomposition
    expected: bool | int
    I: list
    probe: object
    p_I: int = 0
    q: int = 0
    lam: int | None = None
    alpha: int | None = None
    observed: bool | int | None = None
    certified_by: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.observed is not None and self.observed == self.expected

    def manifest(self) -> dict:
        return {
            "problem": self.problem,
            "s": self.s,
            "I-spec": [_spec_json(x) for x in self.I],
            "probe-spec": _spec_json(self.probe),
            "expected": self.expected,
            "p_I": self.p_I,
            "q": self.q,
            "lambda": self.lam,
            "alpha": self.alpha,
            "observed": self.observed,
            "certified_by": self.certified_by,
            "n": self.graph.n,
            "td_depth": self.decomposition.depth,
        }

    def write(self, out_dir, name: str) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / f"{name}.gr", out / f"{name}.td", out / f"{name}.json"]
        paths[0].write_text(write_graph(self.graph))
        paths[1].write_text(write_decomposition(self.decomposition))
        paths[2].write_text(json.dumps(self.manifest(), indent=2) + "\n")
        return paths


def _spec_json(x):
    if isinstance(x, (ColorPartitionSpec, DsPartitionSpec)):
        return x.to_json()
    return list(x)


def spec_from_json(problem: str, obj, s: int):
    """Parse one spec: ``{"R","G","B"}`` lists for 3col, a list A for vc, ``{"B","D","W"}`` for ds."""
    if problem == "3col":
        spec = ColorPartitionSpec(obj.get("R", ()), obj.get("G", ()), obj.get("B", ()))
    elif problem == "vc":
        return vc_spec(obj, s)
    elif problem == "ds":
        spec = DsPartitionSpec(obj["B"], obj["D"], obj["W"])
    else:
        raise ValueError(f"unknown problem {problem!r}")
    if spec.s != s:
        raise ValueError(f"spec covers 1..{spec.s}, expected 1..{s}")
    return spec


def _finish(problem, s, gi: BoundariedGraph, h: BoundariedGraph, **kw) -> CertifiedInstance:
    from .graph import glue

    bg = glue(gi, h)
    td = boundary_chain_decomposition(bg)
    check = validate(bg.graph, td)
    if not check:
        raise AssertionError(f"generated decomposition invalid: {check.message}")
    return CertifiedInstance(problem, s, bg.graph, td, **kw)


def _debug_contract(check: Callable[[], bool]) -> None:
    if DEBUG and not check():
        raise AssertionError(f"{check.__name__} failed")


def coloring_family_instance(I: Iterable[ColorPartitionSpec], probe: ColorPartitionSpec,
                             certify: bool = True) -> CertifiedInstance:
    """Testers for every member of I glued with the probe's enforcer; 3-colourable iff probe not in I."""
    _debug_contract(coloring_circuit_contract)
    I = sorted(set(I), key=lambda x: x.to_json().__repr__())
    s = probe.s
    b = GadgetBuilder(s)
    for spec in I:
        if spec.s != s:
            raise ValueError("specs must share the boundary size")
        _coloring_tester_into(b, spec)
    expected = probe.key() not in {x.key() for x in I}
    inst = _finish("3col", s, b.boundaried(), coloring_enforcer(probe),
                   expected=expected, I=I, probe=probe)
    if certify:
        certify_instance(inst)
    return inst


def vc_family_instance(I: Iterable, probe: Iterable[int], s: int,
                       certify: bool = True) -> CertifiedInstance:
    """Testers for I joined by an apex and padded with K2s to a common optimum l; p_I = l - s."""
    _debug_contract(vc_circuit_contract)
    I = sorted({vc_spec(a, s) for a in I}, key=lambda a: (len(a), a))
    probe = vc_spec(probe, s)
    b = GadgetBuilder(s)
    tops = []
    spent = 0
    for A in I:
        top, lam = _vc_tester_into(b, A)
        tops.append(top)
        spent += 2 * lam
    if tops:
        apex = b.vertex()
        for t in tops:
            b.edge(apex, t)
    full = sum(2 * circuits_for(s - len(A)) for A in vc_specs(s) if len(A) < s)
    for _ in range(full - spent):
        b.k2()
    ell = s + full
    h, q = vc_enforcer(probe, s)
    inst = _finish("vc", s, b.boundaried(), h, expected=ell + (probe in I), I=I, probe=probe,
                   p_I=ell - s, q=q)
    if certify:
        certify_instance(inst)
    return inst


def ds_family_instance(I: Iterable[DsPartitionSpec], probe: DsPartitionSpec,
                       certify: bool = True) -> CertifiedInstance:
    """One tester Gamma_W per third W of the boundary, glued with the probe's enforcer.

    The optimum is C(s, s/3) * alpha + s/3 + 1, plus one when the probe is in I.
    """
    _debug_contract(ds_circuit_contract)
    s = probe.s
    I = sorted(set(I), key=lambda x: (x.W, x.D, x.B))
    t = s // 3
    b = GadgetBuilder(s)
    lam = ds_lambda_size(s)
    for W in combinations(range(1, s + 1), t):
        d_sets = sorted({x.D for x in I if x.W == W})
        _ds_tester_into(b, W, d_sets)
    alpha = comb(2 * t, t) * DS_CIRCUIT_BUDGET * lam + 1
    p_I = comb(s, t) * alpha
    h, q = ds_enforcer(probe)
    inst = _finish("ds", s, b.boundaried(), h, expected=p_I + q + (probe in I), I=I,
                   probe=probe, p_I=p_I, q=q, lam=lam, alpha=alpha)
    if certify:
        certify_instance(inst)
    return inst


def family_instance(problem: str, I: list, probe, s: int, certify: bool = True) -> CertifiedInstance:
    if problem == "3col":
        return coloring_family_instance(I, probe, certify)
    if problem == "vc":
        return vc_family_instance(I, probe, s, certify)
    if problem == "ds":
        return ds_family_instance(I, probe, certify)
    raise ValueError(f"unknown problem {problem!r}")


CERTIFY_3COL_MAX_N = 24


def certify_instance(inst: CertifiedInstance) -> CertifiedInstance:
    """Solve the instance with an oracle where feasible, else with two solvers that must agree.

    Records the observed answer; a mismatch with ``expected`` is left for the
    caller to inspect through ``inst.certified``.
    """
    from .baseline import (ORACLE_MAX_N, color3_branch, oracle_3col, oracle_domset, oracle_vc,
                           vc_branch)
    from .branch import solve_branch
    from .hybrid import solve_hybrid

    g, td = inst.graph, inst.decomposition
    if inst.problem == "3col":
        runs = {"color3-branch": color3_branch(g, td)}
        if g.n <= CERTIFY_3COL_MAX_N:
            runs["oracle"] = oracle_3col(g, max_n=CERTIFY_3COL_MAX_N)
    elif inst.problem == "vc":
        if g.n <= ORACLE_MAX_N:
            runs = {"oracle": oracle_vc(g)}
        else:
            runs = {"vc-branch": vc_branch(g, td), "vc-branch-bnb": vc_branch(g, td, bnb=True)}
    else:
        if g.n <= ORACLE_MAX_N:
            runs = {"oracle": oracle_domset(g)}
        else:
            runs = {"hybrid-fast": solve_hybrid(g, td, "fast"), "branch": solve_branch(g, td)}
    values = set(runs.values())
    if len(values) != 1:
        raise AssertionError(f"solvers disagree on generated instance: {runs}")
    inst.observed = values.pop()
    inst.certified_by = sorted(runs)
    return inst
