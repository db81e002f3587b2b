"""Command-line front end: solve one instance, generate a gadget instance, or run a corpus.

Exit codes: 0 success, 1 parse or validation error, 2 solver precondition
error, 3 solvers disagreeing under ``--algo all``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .baseline import (ORACLE_3COL_MAX_N, ORACLE_MAX_N, color3_branch, domset_classic_dp,
                       oracle_3col, oracle_domset, oracle_vc, vc_branch)
from .branch import solve_branch
from .graph import GraphFormatError, read_graph
from .hybrid import solve_hybrid
from .stats import SolveStats
from .treedepth import (DecompositionError, TreedepthDecomposition, dfs_decomposition,
                        read_decomposition, validate)

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_DISAGREE = 0, 1, 2, 3

ALGOS = {
    "ds": ("branch", "hybrid", "dp", "oracle"),
    "vc": ("branch", "oracle"),
    "3col": ("branch", "oracle"),
}


class PreconditionError(Exception):
    pass


class InputError(Exception):
    pass


def _oracle(fn, limit):
    def run(g, td, stats, args):
        if g.n > limit:
            raise PreconditionError(f"oracle needs n <= {limit}, got {g.n}")
        stats.answer = fn(g)
        return stats.answer
    return run


def _runner(problem: str, algo: str, conv: str):
    """Callable ``(g, td, stats, args) -> answer`` for one algorithm, plus its id."""
    if problem == "ds":
        if algo == "branch":
            return "branch", lambda g, td, st, a: solve_branch(g, td, stats=st)
        if algo == "hybrid":
            return f"hybrid-{conv}", lambda g, td, st, a: solve_hybrid(g, td, conv, stats=st)
        if algo == "dp":
            return "classic-dp", lambda g, td, st, a: domset_classic_dp(g, td, stats=st)
        if algo == "oracle":
            return "oracle", _oracle(oracle_domset, ORACLE_MAX_N)
    elif problem == "vc":
        if algo == "branch":
            return "vc-branch", lambda g, td, st, a: vc_branch(g, td, bnb=a.bnb, stats=st)
        if algo == "oracle":
            return "oracle", _oracle(oracle_vc, ORACLE_MAX_N)
    elif problem == "3col":
        if algo == "branch":
            return "color3-branch", lambda g, td, st, a: color3_branch(g, td, stats=st)
        if algo == "oracle":
            return "oracle", _oracle(oracle_3col, ORACLE_3COL_MAX_N)
    raise PreconditionError(f"algorithm {algo!r} does not solve {problem!r}")


def _plan(problem: str, algo: str, conv: str, n: int) -> list[tuple[str, object]]:
    if algo != "all":
        return [_runner(problem, algo, conv)]
    if problem == "ds":
        plan = [_runner("ds", "branch", conv), _runner("ds", "hybrid", "naive"),
                _runner("ds", "hybrid", "fast"), _runner("ds", "dp", conv)]
        if n <= ORACLE_MAX_N:
            plan.append(_runner("ds", "oracle", conv))
        return plan
    plan = [_runner(problem, "branch", conv)]
    limit = ORACLE_MAX_N if problem == "vc" else ORACLE_3COL_MAX_N
    if n <= limit:
        plan.append(_runner(problem, "oracle", conv))
    return plan


def load_instance(graph_path, td_path=None):
    """Graph, decomposition and whether the decomposition was valid (auto ones always are)."""
    try:
        g = read_graph(graph_path)
    except (GraphFormatError, OSError) as e:
        raise InputError(str(e)) from e
    if td_path is None:
        try:
            return g, dfs_decomposition(g), True
        except DecompositionError as e:
            raise PreconditionError(str(e)) from e
    try:
        td = read_decomposition(td_path)
    except (GraphFormatError, DecompositionError, OSError) as e:
        raise InputError(str(e)) from e
    check = validate(g, td)
    if not check:
        raise InputError(f"invalid decomposition: {check.message}")
    return g, td, True


def solve_instance(problem, algo, conv, g, td: TreedepthDecomposition, args) -> list[dict]:
    out = []
    for name, run in _plan(problem, algo, conv, g.n):
        st = SolveStats(name)
        t0 = time.perf_counter()
        run(g, td, st, args)
        st.wall_time_ms = (time.perf_counter() - t0) * 1000
        out.append(st.as_dict())
    return out


def _cmd_solve(args) -> int:
    g, td, valid = load_instance(args.graph, args.td)
    stats = solve_instance(args.problem, args.algo, args.conv, g, td, args)
    answers = {s["answer"] for s in stats}
    doc = {
        "instance": {"graph": str(args.graph), "td": str(args.td) if args.td else "dfs",
                     "n": g.n, "m": g.m, "depth": td.depth, "problem": args.problem},
        "stats": stats if args.algo == "all" else stats[0],
        "valid_decomposition": valid,
    }
    print(json.dumps(doc, sort_keys=True))
    if len(answers) > 1:
        print(f"solvers disagree: {[(s['algorithm'], s['answer']) for s in stats]}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def _cmd_gen(args) -> int:
    from .gadgets import family_instance, spec_from_json

    if args.s is None or args.probe is None:
        raise InputError("--gen needs --s and --probe")
    try:
        subset = json.loads(Path(args.subset).read_text()) if args.subset else []
        probe_obj = json.loads(Path(args.probe).read_text())
        I = [spec_from_json(args.gen, x, args.s) for x in subset]
        probe = spec_from_json(args.gen, probe_obj, args.s)
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as e:
        raise InputError(f"bad spec file: {e}") from e
    inst = family_instance(args.gen, I, probe, args.s)
    name = args.name or f"{args.gen}_s{args.s}"
    paths = inst.write(args.out or ".", name)
    doc = dict(inst.manifest(), files=[str(p) for p in paths], certified=inst.certified)
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def _bench_one(job) -> list[dict]:
    gr, problem, algo, conv, bnb = job
    stem = gr.with_suffix("")
    manifest = stem.with_suffix(".json")
    meta = {}
    if manifest.exists():
        try:
            meta = json.loads(manifest.read_text())
        except ValueError:
            meta = {}
    problem = meta.get("problem", problem)
    td_path = stem.with_suffix(".td")
    base = {"instance": gr.name, "problem": problem}
    try:
        g, td, _ = load_instance(gr, td_path if td_path.exists() else None)
        plan = _plan(problem, algo, conv, g.n)
    except (InputError, PreconditionError) as e:
        return [dict(base, error=str(e))]
    rows = []
    ns = argparse.Namespace(bnb=bnb)
    for name, run in plan:
        st = SolveStats(name)
        row = dict(base, algorithm=name)
        try:
            t0 = time.perf_counter()
            run(g, td, st, ns)
            st.wall_time_ms = (time.perf_counter() - t0) * 1000
            row["stats"] = st.as_dict()
            if "expected" in meta:
                row["expected"] = meta["expected"]
                row["match"] = st.answer == meta["expected"]
        except Exception as e:  # recorded in-line; the run continues
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(row)
    return rows


def _cmd_bench(args) -> int:
    root = Path(args.bench)
    if not root.is_dir():
        raise InputError(f"{root} is not a directory")
    jobs = [(p, args.problem, args.algo, args.conv, args.bnb) for p in sorted(root.glob("*.gr"))]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_one, jobs))
    else:
        results = [_bench_one(j) for j in jobs]
    for rows in results:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdsolve", description=__doc__.splitlines()[0])
    p.add_argument("--problem", choices=sorted(ALGOS), default="ds")
    p.add_argument("--algo", choices=["branch", "hybrid", "dp", "oracle", "all"], default="hybrid")
    p.add_argument("--conv", choices=["naive", "fast"], default="fast")
    p.add_argument("--graph", help="graph file (p td n m header)")
    p.add_argument("--td", help="decomposition file; a DFS decomposition is used if omitted")
    p.add_argument("--gen", choices=["3col", "vc", "ds"], help="write a gadget family instance")
    p.add_argument("--s", type=int, help="boundary size for --gen")
    p.add_argument("--subset", help="JSON list of specs forming I (default: empty)")
    p.add_argument("--probe", help="JSON spec of the probe enforcer")
    p.add_argument("--out", help="output directory for --gen")
    p.add_argument("--name", help="file stem for --gen output")
    p.add_argument("--bench", metavar="DIR", help="solve every .gr file in DIR")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bnb", action="store_true", help="matching lower bound in the vertex cover branching")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.gen:
            return _cmd_gen(args)
        if args.bench:
            return _cmd_bench(args)
        if not args.graph:
            parser.error("one of --graph, --gen or --bench is required")
        return _cmd_solve(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())
