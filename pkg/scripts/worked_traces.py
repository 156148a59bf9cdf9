#!/usr/bin/env python3
"""Walk the small worked examples and print their solution streams,
round counts, and final tables under each strategy."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import lintab.corpus as corpus
from lintab import EngineOptions, load_program, run_query
from lintab.table import dump

EXAMPLES = [
    ("left-recursive transitive closure", corpus.LEFT_RECURSIVE_TC, corpus.LEFT_RECURSIVE_TC_QUERY),
    ("two-fact self join", corpus.TWO_FACT_SELF_JOIN, corpus.TWO_FACT_SELF_JOIN_QUERY),
    ("fresh-subgoal guard", corpus.FRESH_SUBGOAL_GUARD, corpus.FRESH_SUBGOAL_GUARD_QUERY),
    ("fresh-subgoal guard, fact first", corpus.FRESH_SUBGOAL_GUARD_REORDERED, corpus.FRESH_SUBGOAL_GUARD_QUERY),
    ("self-feeding pair", corpus.SELF_FEEDING_PAIR, corpus.SELF_FEEDING_PAIR_QUERY),
]


def main():
    for name, text, query in EXAMPLES:
        print(f"== {name}  (query: {query})")
        program = load_program(text)
        for strategy in ("lazy", "eager"):
            sols, eng = run_query(program, query, EngineOptions(strategy=strategy))
            print(f"  {strategy:5}: stream = {sols}")
            print(f"         rounds = {eng.stats.entry_rounds}")
        _, eng = run_query(program, query, EngineOptions())
        for line in dump(eng.store).splitlines():
            print(f"         table: {line}")
        print()


if __name__ == "__main__":
    main()
