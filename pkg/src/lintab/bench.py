"""Benchmark harness: configuration matrices, agreement checks, reports.

Every bench run first checks that all engine configurations agree on the
answer sets (and on the bottom-up oracle where it applies) before any
counters are reported; a divergence is a hard failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import corpus, load_program, oracle
from .engine import EAGER, LAZY, Engine, EngineOptions
from .oracle import OracleInapplicable, answers_for_key, oracle_model
from .parser import parse_program, parse_query
from .table import check_region_invariants
from .terms import render


def config_matrix() -> list[tuple[str, EngineOptions]]:
    """All valid strategy/optimization combinations.

    Early promotion without semi-naive consumption is rejected by option
    validation, so the full 2x2x2 grid collapses to six runnable configs.
    """
    out = []
    for strategy in (LAZY, EAGER):
        for semi_naive, early in ((False, False), (True, False), (True, True)):
            label = (
                f"{strategy},semi_naive={'on' if semi_naive else 'off'},"
                f"early_promotion={'on' if early else 'off'}"
            )
            out.append(
                (
                    label,
                    EngineOptions(
                        strategy=strategy,
                        semi_naive=semi_naive,
                        early_promotion=early,
                    ),
                )
            )
    return out


@dataclass
class InstanceResult:
    name: str
    rows: list[dict] = field(default_factory=list)
    solutions: dict[str, frozenset] = field(default_factory=dict)
    entry_answers: dict[str, dict] = field(default_factory=dict)
    entry_rounds: dict[str, dict] = field(default_factory=dict)
    divergences: list[str] = field(default_factory=list)


def entry_answer_sets(engine: Engine) -> dict[str, frozenset]:
    return {
        render(e.key): frozenset(render(a) for a in e.answers)
        for e in engine.store
    }


def run_instance(
    name: str,
    text: str,
    query: str,
    configs: Optional[list[tuple[str, EngineOptions]]] = None,
    use_oracle: bool = True,
    step_budget: int = 10**8,
) -> InstanceResult:
    """Run one (program, query) under every config and self-check."""
    program = load_program(text)
    result = InstanceResult(name=name)
    for label, opts in configs or config_matrix():
        opts = EngineOptions(
            strategy=opts.strategy,
            semi_naive=opts.semi_naive,
            early_promotion=opts.early_promotion,
            step_budget=step_budget,
        )
        eng = Engine(program, opts)
        t0 = time.monotonic()
        sols = list(eng.run(query))
        elapsed = time.monotonic() - t0
        check_region_invariants(eng.store)
        result.solutions[label] = frozenset(sols)
        result.entry_answers[label] = entry_answer_sets(eng)
        result.entry_rounds[label] = dict(eng.stats.entry_rounds)
        row = {"instance": name, "config": label, "time": elapsed}
        row.update(eng.stats.as_dict())
        row["solutions"] = len(frozenset(sols))
        result.rows.append(row)

    labels = list(result.solutions)
    base = labels[0]
    for label in labels[1:]:
        if result.solutions[label] != result.solutions[base]:
            result.divergences.append(
                f"{name}: solution set differs between {base} and {label}"
            )
        if result.entry_answers[label] != result.entry_answers[base]:
            result.divergences.append(
                f"{name}: per-entry answers differ between {base} and {label}"
            )

    if use_oracle:
        try:
            items = parse_program(text)
            expected = oracle.oracle_solve(items, query)
            if frozenset(expected) != result.solutions[base]:
                result.divergences.append(
                    f"{name}: engine disagrees with the bottom-up oracle"
                )
            model = oracle_model(items)
            program_keys = result.entry_answers[base]
            goals, _ = parse_query(query)
            for key_text, answers in program_keys.items():
                key_term = parse_query(key_text)[0][0]
                want = frozenset(
                    render(f) for f in answers_for_key(model, key_term)
                )
                if answers != want:
                    result.divergences.append(
                        f"{name}: entry {key_text} disagrees with the oracle"
                    )
        except OracleInapplicable:
            pass  # oracle skipped, never silently passed off as agreement
    return result


def _graph_facts(graph: str, n: int, m: Optional[int], seed: int) -> str:
    from .generate import chain_facts, cycle_facts, random_graph_facts

    if graph == "chain":
        return chain_facts(n, pred="edge")
    if graph == "cycle":
        return cycle_facts(n, pred="edge")
    if graph == "random":
        return random_graph_facts(n, m or max(1, 2 * n), seed, pred="edge")
    raise ValueError(f"unknown graph kind {graph!r}")


def suite_instances(
    suite: str, sizes: list[int], seed: int
) -> list[tuple[str, str, str]]:
    """(name, program text, query) triples for a named suite."""
    instances = []
    if suite in ("tcl", "tcr", "tcn", "sg"):
        for n in sizes:
            for graph in ("chain", "cycle", "random"):
                m = min(2 * n, n * (n - 1)) if graph == "random" else None
                facts = _graph_facts(graph, n, m, seed)
                text, query = corpus.datalog_program(suite, facts, n)
                instances.append((f"{suite}-{graph}-{n}", text, query))
    elif suite == "regex-warren":
        for n in sizes:
            text, query = corpus.string_matcher_program(n, tabled_step=True)
            instances.append((f"regex-warren-{n}", text, query))
    elif suite == "regex-warren-nontabled":
        for n in sizes:
            text, query = corpus.string_matcher_program(n, tabled_step=False)
            instances.append((f"regex-warren-nontabled-{n}", text, query))
    elif suite == "paper-examples":
        instances = [
            ("left-recursive-tc", corpus.LEFT_RECURSIVE_TC, corpus.LEFT_RECURSIVE_TC_QUERY),
            ("two-fact-self-join", corpus.TWO_FACT_SELF_JOIN, corpus.TWO_FACT_SELF_JOIN_QUERY),
            ("fresh-subgoal-guard", corpus.FRESH_SUBGOAL_GUARD, corpus.FRESH_SUBGOAL_GUARD_QUERY),
            ("fresh-subgoal-guard-reordered", corpus.FRESH_SUBGOAL_GUARD_REORDERED, corpus.FRESH_SUBGOAL_GUARD_QUERY),
            ("self-feeding-pair", corpus.SELF_FEEDING_PAIR, corpus.SELF_FEEDING_PAIR_QUERY),
        ]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return instances


def bench_suite(
    suite: str,
    sizes: list[int],
    seed: int,
    use_oracle: bool = True,
    step_budget: int = 10**8,
) -> tuple[list[InstanceResult], str]:
    """Run a suite across the config matrix; returns results and a report."""
    results = []
    for name, text, query in suite_instances(suite, sizes, seed):
        results.append(
            run_instance(
                name, text, query, use_oracle=use_oracle, step_budget=step_budget
            )
        )
    lines = []
    for r in results:
        for row in r.rows:
            fields = " ".join(
                f"{k}={row[k]}"
                for k in (
                    "subgoals",
                    "max_its",
                    "ave_its",
                    "answers_produced",
                    "answers_consumed",
                    "clause_resolutions",
                    "solutions",
                )
            )
            lines.append(
                f"instance={row['instance']} config={row['config']} "
                f"time={row['time']:.4f} {fields}"
            )
        for d in r.divergences:
            lines.append(f"DIVERGENCE {d}")
    # size-to-size consumption ratios per config, for complexity checks
    if len(results) >= 2 and suite.startswith("regex"):
        by_config: dict[str, list[tuple[str, int]]] = {}
        for r in results:
            for row in r.rows:
                by_config.setdefault(row["config"], []).append(
                    (row["instance"], row["answers_consumed"])
                )
        for config, pairs in by_config.items():
            for (n1, c1), (n2, c2) in zip(pairs, pairs[1:]):
                if c1:
                    lines.append(
                        f"ratio config={config} {n2}/{n1} "
                        f"answers_consumed={c2 / c1:.2f}"
                    )
    return results, "\n".join(lines)
