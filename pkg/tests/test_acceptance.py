"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v``; the lines bypass output capture.
"""

import random
import time
from itertools import combinations

import numpy as np
import pytest

from tdsolve.baseline import (color3_branch,
                              domset_classic_dp, oracle_3col, oracle_domset, vc_branch)
from tdsolve.branch import BranchSolver
from tdsolve.gadgets import (CERTIFY_3COL_MAX_N, color_specs, coloring_family_instance,
                             ds_family_instance, ds_specs, vc_family_instance, vc_specs)
from tdsolve.generators import clique_chain, large_corpus, local_tree_graph, seed_from_env, small_corpus
from tdsolve.hybrid import HybridSolver
from tdsolve.stats import SolveStats
from tdsolve.tables import BIG, CostTable, convolve_fast, convolve_naive

pytestmark = pytest.mark.slow

SEED = seed_from_env()


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def _four_solvers(g, td):
    """Answers of branch, hybrid naive/fast and the classic DP, plus their stats."""
    answers, stats = {}, {}
    solver = BranchSolver(g, td, stats=SolveStats("branch"))
    answers["branch"] = solver.solve()
    stats["branch"] = solver.stats
    for mode in ("naive", "fast"):
        h = HybridSolver(g, td, mode)
        answers[f"hybrid-{mode}"] = h.solve()
        stats[f"hybrid-{mode}"] = h.stats
    st = SolveStats("classic-dp")
    answers["classic-dp"] = domset_classic_dp(g, td, stats=st)
    stats["classic-dp"] = st
    return answers, stats


@pytest.fixture(scope="module")
def small_run():
    t0 = time.perf_counter()
    rows = []
    for g, td in small_corpus(500, 18, SEED):
        answers, stats = _four_solvers(g, td)
        rows.append((oracle_domset(g), answers, stats, td.depth))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def large_run():
    t0 = time.perf_counter()
    rows = []
    for g, td in large_corpus(100, 60, 16, SEED):
        answers, stats = _four_solvers(g, td)
        rows.append((None, answers, stats, td.depth))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def ds_gadget_run():
    t0 = time.perf_counter()
    specs = ds_specs(3)
    rows = []
    for k in range(3):
        for I in combinations(specs, k):
            for probe in specs:
                inst = ds_family_instance(I, probe, certify=False)
                h = HybridSolver(inst.graph, inst.decomposition, "fast")
                rows.append((inst, probe in I, h.solve(), h.stats, inst.decomposition.depth))
    return rows, time.perf_counter() - t0


def test_criterion_1_cross_solver_exactness(small_run, report):
    rows, elapsed = small_run
    bad = sum(any(a != want for a in answers.values()) for want, answers, _, _ in rows)
    ok = bad == 0 and len(rows) == 500 and elapsed < 120
    report(1, ok, f"{len(rows) - bad}/{len(rows)} graphs agree with the oracle in {elapsed:.1f}s")
    assert ok


def test_criterion_2_large_instance_agreement(large_run, report):
    rows, elapsed = large_run
    bad = sum(len(set(answers.values())) != 1 for _, answers, _, _ in rows)
    ok = bad == 0 and len(rows) == 100 and elapsed < 600
    report(2, ok, f"{len(rows) - bad}/{len(rows)} graphs with all four solvers equal in {elapsed:.1f}s")
    assert ok


def test_criterion_3_coloring_gadget(report):
    t0 = time.perf_counter()
    specs = color_specs(3)
    bad = 0
    for X in specs:
        for Y in specs:
            inst = coloring_family_instance([X], Y, certify=False)
            got = color3_branch(inst.graph, inst.decomposition)
            ref = oracle_3col(inst.graph, max_n=CERTIFY_3COL_MAX_N)
            bad += not (got == ref == (X.key() != Y.key()))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    report(3, ok, f"{len(specs) ** 2 - bad}/{len(specs) ** 2} ordered pairs correct in {elapsed:.1f}s")
    assert ok


def test_criterion_4_vc_gadget_accounting(report):
    t0 = time.perf_counter()
    specs = vc_specs(3)
    total = bad = nested = 0
    for k in range(4):
        for I in combinations(specs, k):
            for probe in specs:
                inst = vc_family_instance(I, probe, 3, certify=False)
                got = vc_branch(inst.graph, inst.decomposition)
                want = inst.p_I + 3 + (probe in I)
                total += 1
                if got != want:
                    bad += 1
                    nested += probe not in I and any(set(probe) < set(a) for a in I)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 300
    report(4, ok, f"{total - bad}/{total} cases match; {nested} of the {bad} misses have the probe "
                  f"strictly inside a member of I; {elapsed:.1f}s")
    assert ok


def test_criterion_5_ds_gadget_accounting(ds_gadget_run, report):
    rows, elapsed = ds_gadget_run
    bad = 0
    for inst, member, got, _, _ in rows:
        bad += got != inst.expected or inst.expected != inst.p_I + inst.q + member
    ok = bad == 0 and elapsed < 600
    report(5, ok, f"{len(rows) - bad}/{len(rows)} instances hit the expected optimum in {elapsed:.1f}s")
    assert ok


def test_criterion_6_table_shape_bounds(small_run, large_run, ds_gadget_run, report):
    solves = violations = 0
    for rows in (small_run[0], large_run[0]):
        for _, _, stats, depth in rows:
            for name in ("hybrid-naive", "hybrid-fast"):
                st = stats[name]
                solves += 1
                violations += len(st.violations) + (st.peak_recursion_depth > depth + 1)
    for _, _, _, st, depth in ds_gadget_run[0]:
        solves += 1
        violations += len(st.violations) + (st.peak_recursion_depth > depth + 1)
    ok = violations == 0
    report(6, ok, f"{violations} violations over {solves} hybrid solves")
    assert ok


def test_criterion_7_branch_frame_bounds(small_run, large_run, report):
    solves = violations = 0
    for rows in (small_run[0], large_run[0]):
        for _, _, stats, _ in rows:
            solves += 1
            violations += len(stats["branch"].violations)
    ok = violations == 0
    report(7, ok, f"{violations} violations over {solves} branch solves")
    assert ok


def _random_table(rng, u):
    size = 1 << u
    pc = np.array([bin(i).count("1") for i in range(size)])
    base = int(rng.integers(0, 5))
    vals = (base + np.minimum(rng.integers(0, u + 1, size) * (pc > 0), pc)).astype(np.int64)
    if rng.random() < 0.5:
        for j in range(u):
            w = vals.reshape(-1, 2, 1 << j)
            np.maximum(w[:, 0, :], w[:, 1, :], out=w[:, 1, :])
        vals = np.minimum(vals, base + pc)
    inf = rng.random(size) < rng.random() * 0.5
    inf[0] = False
    vals[inf] = BIG
    return CostTable.from_values(tuple(range(u)), vals)


def test_criterion_8_convolution_equivalence(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    bad = 0
    for _ in range(1000):
        u = int(rng.integers(0, 13))
        a, b = _random_table(rng, u), _random_table(rng, u)
        fast, naive = convolve_fast(a, b), convolve_naive(a, b)
        bad += not (fast.base == naive.base and np.array_equal(fast.offsets, naive.offsets))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    report(8, ok, f"{1000 - bad}/1000 pairs bitwise equal in {elapsed:.1f}s")
    assert ok


def test_criterion_9_space_separation(report):
    t0 = time.perf_counter()
    ts = list(range(6, 15))
    dp_peaks, hy_peaks = [], []
    for t in ts:
        g, td = clique_chain(t)
        st = SolveStats("classic-dp")
        domset_classic_dp(g, td, stats=st)
        dp_peaks.append(st.peak_live_table_entries)
        h = HybridSolver(g, td, "fast", memo=False)
        h.solve()
        hy_peaks.append(h.stats.peak_live_table_entries)
    dp_slope = np.polyfit(ts, np.log2(dp_peaks), 1)[0]
    hy_slope = np.polyfit(ts, np.log2(hy_peaks), 1)[0]
    elapsed = time.perf_counter() - t0
    ok = dp_slope >= 1.45 and hy_slope <= 1.15 and elapsed < 300
    report(9, ok, f"slopes classic DP {dp_slope:.3f}, hybrid {hy_slope:.3f} in {elapsed:.1f}s")
    assert ok


def test_criterion_10_runtime_smoke(report):
    g, td = local_tree_graph(10_000, 14, 3, random.Random(1))
    assert td.depth == 14
    t0 = time.perf_counter()
    answer = HybridSolver(g, td, "fast").solve()
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60 and answer > 0
    report(10, ok, f"n = {g.n}, depth 14, answer {answer} in {elapsed:.1f}s")
    assert ok
