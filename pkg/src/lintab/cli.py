"""Command-line front end: run queries, benchmark, generate, analyze.

Exit codes: 0 success, 1 query completed with no solutions, 2 usage or
parse errors, 3 step budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import bench, generate, load_program
from .engine import EAGER, LAZY, Engine, EngineOptions, StepBudgetExceeded
from .oracle import OracleInapplicable, oracle_solve
from .parser import ProgramSyntaxError
from .table import dump

EXIT_OK = 0
EXIT_NO_SOLUTIONS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _onoff(value: str) -> bool:
    if value == "on":
        return True
    if value == "off":
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {value!r}")


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=(LAZY, EAGER), default=LAZY)
    p.add_argument("--semi-naive", type=_onoff, default=True, metavar="on|off")
    p.add_argument(
        "--early-promotion", type=_onoff, default=True, metavar="on|off"
    )
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--limit", type=int, default=None, metavar="N")
    p.add_argument("--step-budget", type=int, default=10**8, metavar="N")


def _options(args) -> EngineOptions:
    return EngineOptions(
        strategy=args.strategy,
        semi_naive=args.semi_naive,
        early_promotion=args.early_promotion,
        dedup_solutions=args.dedup,
        limit=args.limit,
        step_budget=args.step_budget,
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lintab",
        description="Tabled logic-programming engine (linear tabling).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a query against a program file")
    run.add_argument("program", type=Path)
    run.add_argument("query")
    _add_engine_flags(run)
    run.add_argument("--stats", action="store_true")
    run.add_argument("--dump-table", action="store_true")
    run.add_argument(
        "--oracle",
        action="store_true",
        help="also run the bottom-up reference evaluator and compare",
    )

    bn = sub.add_parser("bench", help="run a benchmark suite over all configs")
    bn.add_argument(
        "suite",
        choices=(
            "tcl",
            "tcr",
            "tcn",
            "sg",
            "regex-warren",
            "regex-warren-nontabled",
            "paper-examples",
        ),
    )
    bn.add_argument(
        "--sizes", type=int, nargs="*", default=[10], metavar="N"
    )
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--no-oracle", action="store_true")
    bn.add_argument("--step-budget", type=int, default=10**8, metavar="N")
    bn.add_argument("--json", type=Path, default=None, metavar="FILE")

    gen = sub.add_parser("gen", help="emit a generated fact file to stdout")
    gen.add_argument(
        "kind", choices=("chain", "cycle", "random-graph", "ab-string")
    )
    gen.add_argument("n", type=int)
    gen.add_argument("--edges", type=int, default=None, metavar="M")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--pred", default=None)

    an = sub.add_parser("analyze", help="print the program analysis report")
    an.add_argument("program", type=Path)

    return ap


def _cmd_run(args) -> int:
    try:
        opts = _options(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = args.program.read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        program = load_program(text)
        engine = Engine(program, opts)
        solutions = []
        try:
            for sol in engine.run(args.query):
                solutions.append(sol)
                print(sol)
        except StepBudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
    except ProgramSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.stats:
        print("-- stats --")
        for line in engine.stats.as_lines():
            print(line)
    if args.dump_table:
        print("-- table --")
        print(dump(engine.store))
    if args.oracle:
        try:
            expected = oracle_solve(text, args.query)
        except OracleInapplicable as exc:
            print(f"oracle: inapplicable ({exc})")
        else:
            got = set(solutions)
            if args.limit is None and got == expected:
                print(f"oracle: agreement on {len(expected)} solutions")
            elif args.limit is not None and got <= expected:
                print("oracle: truncated run is a subset of the model")
            else:
                print("oracle: DIVERGENCE")
                for s in sorted(expected - got):
                    print(f"  missing: {s}")
                for s in sorted(got - expected):
                    print(f"  extra:   {s}")
                return EXIT_USAGE
    return EXIT_OK if solutions else EXIT_NO_SOLUTIONS


def _cmd_bench(args) -> int:
    try:
        results, report = bench.bench_suite(
            args.suite,
            args.sizes,
            args.seed,
            use_oracle=not args.no_oracle,
            step_budget=args.step_budget,
        )
    except StepBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(report)
    if args.json is not None:
        payload = [
            {
                "name": r.name,
                "rows": r.rows,
                "divergences": r.divergences,
                "solutions": {k: sorted(v) for k, v in r.solutions.items()},
            }
            for r in results
        ]
        args.json.write_text(json.dumps(payload, indent=2) + "\n")
    if any(r.divergences for r in results):
        return EXIT_USAGE
    return EXIT_OK


def _cmd_gen(args) -> int:
    try:
        if args.kind == "chain":
            out = generate.chain_facts(args.n, pred=args.pred or "e")
        elif args.kind == "cycle":
            out = generate.cycle_facts(args.n, pred=args.pred or "e")
        elif args.kind == "random-graph":
            if args.edges is None:
                print("error: random-graph needs --edges", file=sys.stderr)
                return EXIT_USAGE
            out = generate.random_graph_facts(
                args.n, args.edges, args.seed, pred=args.pred or "e"
            )
        else:
            out = generate.ab_string_facts(args.n, pred=args.pred or "c")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    try:
        text = args.program.read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        program = load_program(text)
    except ProgramSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(program.report())
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "gen":
        return _cmd_gen(args)
    return _cmd_analyze(args)


if __name__ == "__main__":
    sys.exit(main())
