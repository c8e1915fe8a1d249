"""Command-line interface: gen, solve, verify, oracle, bench, compare.

Exit codes: 0 success, 1 verification mismatch, 2 infeasible input,
3 parse error, 4 internal invariant violation or oracle budget exhausted.
"""

import argparse
import concurrent.futures
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from . import harness
from .errors import (InfeasibleError, InternalContradiction,
                     OracleBudgetError, OracleTimeout, ParseError)
from .harness import (FAMILIES, baseline_dfs2, format_instance, generate,
                      instance_hash, parse_instance, report_json,
                      report_with_opt, solve, verify)
from .oracle import OracleBudget, min_2ecss


def _read_graph(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _budget(args) -> OracleBudget:
    return OracleBudget(vertex_cap=args.oracle_vertex_cap,
                        time_cap=args.oracle_time_cap)


def _solve_flags(args) -> Dict[str, object]:
    return dict(alpha=Fraction(args.alpha),
                seed=args.seed,
                max_guesses=args.max_guesses,
                first_feasible=args.first_feasible,
                budget=_budget(args),
                want_trace=args.trace)


def cmd_gen(args) -> int:
    g = harness.generate(args.family, args.n, args.seed,
                         density=args.density, chords=args.chords)
    comments = [f"family {args.family} n {args.n} seed {args.seed}",
                f"hash {instance_hash(g)}"]
    _write(args.out, format_instance(g, comments))
    return 0


def cmd_solve(args) -> int:
    g = _read_graph(args.instance)
    sol, report = solve(g, **_solve_flags(args))
    if args.with_opt:
        report = report_with_opt(g, report, _budget(args))
    text = report_json(report)
    _write(args.report, text)
    if args.report not in (None, "-"):
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    g = _read_graph(args.instance)
    ids = [int(tok) for tok in Path(args.solution).read_text().split()]
    verdict = verify(g, ids)
    out = {"instance": instance_hash(g), "size": len(set(ids)), **verdict}
    if args.with_opt and verdict["status"] == "OK":
        opt = min_2ecss(g, _budget(args))
        out["opt"] = len(opt)
        out["ratio"] = str(Fraction(len(set(ids)), len(opt)))
    _write(args.report, report_json(out))
    return 0 if verdict["status"] == "OK" else 1


def cmd_oracle(args) -> int:
    g = _read_graph(args.instance)
    opt = min_2ecss(g, _budget(args))
    out = {"instance": instance_hash(g), "algorithm": "oracle",
           "n": g.n, "m": g.m, "solution": sorted(opt), "size": len(opt)}
    _write(args.report, report_json(out))
    return 0


def _bench_one(path: str, flags: Dict[str, object], with_opt: bool,
               budget: OracleBudget) -> Dict[str, object]:
    g = _read_graph(path)
    sol, report = solve(g, **flags)
    base = baseline_dfs2(g)
    row: Dict[str, object] = {
        "file": path,
        "instance": report["instance"],
        "n": g.n, "m": g.m,
        "paper54": len(sol),
        "dfs2approx": len(base),
        "certified": report["certified"],
    }
    if with_opt:
        try:
            opt = min_2ecss(g, budget)
            row["opt"] = len(opt)
            row["ratio"] = str(Fraction(len(sol), len(opt)))
            row["baseline_ratio"] = str(Fraction(len(base), len(opt)))
        except (OracleBudgetError, OracleTimeout):
            row["opt"] = None
    return row


def cmd_bench(args) -> int:
    paths: List[str] = []
    for item in args.instances:
        p = Path(item)
        if p.is_dir():
            paths += sorted(str(q) for q in p.glob("*.txt"))
        else:
            paths.append(item)
    flags = _solve_flags(args)
    budget = _budget(args)
    if args.jobs > 1 and len(paths) > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, paths,
                                 [flags] * len(paths),
                                 [args.with_opt] * len(paths),
                                 [budget] * len(paths)))
    else:
        rows = [_bench_one(p, flags, args.with_opt, budget) for p in paths]
    rows.sort(key=lambda r: (str(r["instance"]), str(r["file"])))
    cols = ["file", "n", "m", "paper54", "dfs2approx", "opt", "ratio"]
    for row in rows:
        print("  ".join(f"{row.get(c, '')}" for c in cols))
    out = {"algorithm": "bench", "rows": rows, "count": len(rows)}
    if args.report:
        _write(args.report, report_json(out))
    return 0


def cmd_compare(args) -> int:
    g = _read_graph(args.instance)
    sol, report = solve(g, **_solve_flags(args))
    base = baseline_dfs2(g)
    out = dict(report)
    out["dfs2approx"] = len(base)
    if args.with_opt:
        out = report_with_opt(g, out, _budget(args))
        out["baseline_ratio"] = str(Fraction(len(base), int(out["opt"])))
    _write(args.report, report_json(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="twoec")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("instance", help="instance file, or - for stdin")
        p.add_argument("--alpha", default="5/4")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trace", action="store_true")
        p.add_argument("--oracle-vertex-cap", type=int, default=16)
        p.add_argument("--oracle-time-cap", type=float, default=None)
        p.add_argument("--max-guesses", type=int, default=None)
        p.add_argument("--first-feasible", action="store_true")
        p.add_argument("--with-opt", action="store_true",
                       help="also run the exact oracle and report the ratio")
        p.add_argument("--report", default=None,
                       help="write the JSON report here instead of stdout")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--chords", type=int, default=6)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run the 5/4 pipeline")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file")
    common(p)
    p.add_argument("solution", help="file of whitespace-separated edge ids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact minimum via branch and bound")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run a corpus")
    common(p, instance=False)
    p.add_argument("instances", nargs="*", help="files or directories")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="pipeline vs DFS baseline")
    common(p)
    p.set_defaults(func=cmd_compare)
    return top


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (InternalContradiction, OracleBudgetError, OracleTimeout) as exc:
        print(f"internal: {exc}", file=sys.stderr)
        cex = getattr(exc, "counterexample", None)
        if cex is not None:
            print(f"counterexample: {cex!r}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
