"""Engine behavior: strategies, rounds, loops, options, budgets."""

import pytest

import lintab.corpus as corpus
from lintab import (
    EAGER,
    LAZY,
    Engine,
    EngineError,
    EngineOptions,
    StepBudgetExceeded,
    load_program,
    run_query,
)
from lintab.bench import config_matrix
from lintab.table import check_region_invariants


def solve(text, query, **kw):
    return run_query(load_program(text), query, EngineOptions(**kw))


def test_options_validation():
    with pytest.raises(ValueError):
        EngineOptions(strategy="bogus")
    with pytest.raises(ValueError):
        EngineOptions(semi_naive=False, early_promotion=True)
    with pytest.raises(ValueError):
        EngineOptions(step_budget=0)


def test_left_recursion_terminates_with_all_answers():
    sols, eng = solve(corpus.LEFT_RECURSIVE_TC, "p(a,Y)")
    assert sols == ["p(a,b)", "p(a,c)"]
    assert eng.stats.entry_rounds == {"p(a,_G0)": 3}


def test_fully_open_call():
    sols, _ = solve(corpus.LEFT_RECURSIVE_TC, "p(X,Y)")
    assert set(sols) == {"p(a,b)", "p(a,c)", "p(b,c)"}


def test_eager_emits_duplicates_lazy_does_not():
    sols_eager, _ = solve(corpus.TWO_FACT_SELF_JOIN, "p(X),p(Y)", strategy=EAGER)
    sols_lazy, _ = solve(corpus.TWO_FACT_SELF_JOIN, "p(X),p(Y)", strategy=LAZY)
    assert len(sols_eager) == 7 and len(sols_lazy) == 4
    assert set(sols_eager) == set(sols_lazy)


def test_dedup_collapses_eager_duplicates():
    sols, _ = solve(
        corpus.TWO_FACT_SELF_JOIN, "p(X),p(Y)", strategy=EAGER, dedup_solutions=True
    )
    assert sols == ["p(1),p(1)", "p(2),p(1)", "p(2),p(2)", "p(1),p(2)"]


def test_limit_truncates_stream():
    sols, _ = solve(corpus.TWO_FACT_SELF_JOIN, "p(X),p(Y)", strategy=EAGER, limit=3)
    assert sols == ["p(1),p(1)", "p(2),p(1)", "p(2),p(2)"]


def test_per_predicate_strategy_overrides_default():
    text = ":- table p/1 eager.\np(1).\np(2).\n"
    sols, _ = solve(text, "p(X),p(Y)", strategy=LAZY)
    assert len(sols) == 7  # the declaration wins over the lazy default


def test_mixed_strategies_in_one_program():
    text = ":- table p/1 eager.\n:- table q/1 lazy.\np(1).\np(2).\nq(3).\nq(4).\n"
    sols, _ = solve(text, "p(X),q(Y)")
    assert set(sols) == {f"p({i}),q({j})" for i in (1, 2) for j in (3, 4)}


def test_nontabled_predicates_resolve_by_clauses():
    sols, _ = solve("e(a,b).\ne(b,c).\n", "e(X,Y)")
    assert sols == ["e(a,b)", "e(b,c)"]


def test_undefined_predicate_fails_finitely():
    sols, eng = solve("p(a) :- missing(a).\np(b).\n", "p(X)")
    assert sols == ["p(b)"]
    assert eng.stats.undefined_calls == 1


def test_conjunctive_query_backtracking():
    sols, _ = solve("e(a,b).\ne(b,c).\ne(a,c).\n", "e(X,Y),e(Y,Z)")
    assert set(sols) == {"e(a,b),e(b,c)"}


def test_fake_loop_under_eager_not_a_real_loop():
    # after p's first answer is returned eagerly, the second top-level call
    # to p is a follower of a still-active pioneer that is NOT an ancestor
    sols, eng = solve(corpus.TWO_FACT_SELF_JOIN, "p(X),p(Y)", strategy=EAGER)
    assert len(sols) == 7
    check_region_invariants(eng.store)


def test_guard_program_keeps_late_answer_all_configs():
    for label, opts in config_matrix():
        sols, eng = run_query(
            load_program(corpus.FRESH_SUBGOAL_GUARD),
            corpus.FRESH_SUBGOAL_GUARD_QUERY,
            opts,
        )
        assert set(sols) == {"p(a,b)", "p(b,c)", "p(b,d)"}, label
        check_region_invariants(eng.store)


def test_reordered_guard_fixpoint_in_two_rounds():
    sols, eng = solve(corpus.FRESH_SUBGOAL_GUARD_REORDERED, "p(X,Y)")
    assert set(sols) == {"p(a,b)", "p(b,c)", "p(b,d)"}
    assert eng.stats.entry_rounds["p(_G0,_G1)"] == 2


def test_round_counts_unaffected_by_semi_naive():
    for text, query in [
        (corpus.LEFT_RECURSIVE_TC, "p(a,Y)"),
        (corpus.FRESH_SUBGOAL_GUARD, "p(X,Y)"),
        (corpus.SELF_FEEDING_PAIR, "p(X,Y)"),
    ]:
        _, on = solve(text, query, semi_naive=True, early_promotion=False)
        _, off = solve(text, query, semi_naive=False, early_promotion=False)
        assert on.stats.entry_rounds == off.stats.entry_rounds


def test_early_promotion_reduces_consumption():
    text, query = corpus.string_matcher_program(60)
    _, with_ep = solve(text, query, early_promotion=True)
    _, without = solve(text, query, early_promotion=False)
    assert with_ep.stats.answers_consumed < without.stats.answers_consumed


def test_completed_tables_are_reused():
    sols, eng = solve(corpus.LEFT_RECURSIVE_TC, "p(a,Y),p(a,Z)")
    assert len(sols) == 4
    # one entry serves both calls
    assert eng.stats.subgoal_count == 1


def test_step_budget_enforced():
    with pytest.raises(StepBudgetExceeded):
        solve(corpus.LEFT_RECURSIVE_TC, "p(X,Y)", step_budget=5)


def test_engine_single_run_guard():
    eng = Engine(load_program("p(a)."))
    list(eng.run("p(X)"))
    with pytest.raises(EngineError):
        list(eng.run("p(X)"))


def test_stats_counters_consistent():
    _, eng = solve(corpus.LEFT_RECURSIVE_TC, "p(a,Y)")
    s = eng.stats
    assert s.answers_produced == 2
    assert s.answers_consumed >= s.answers_produced
    assert s.clause_resolutions > 0
    assert s.max_iterations == 3 and s.subgoal_count == 1
    d = s.as_dict()
    assert d["ave_its"] == 3.0
    assert "ave_its=3.00" in s.as_lines()


def test_declared_but_undefined_tabled_predicate():
    sols, _ = solve(":- table p/1.\nq(a).\n", "p(X)")
    assert sols == []


def test_query_with_repeated_variable():
    sols, _ = solve("e(a,a).\ne(a,b).\n", "e(X,X)")
    assert sols == ["e(a,a)"]


def test_nonground_answers():
    sols, _ = solve(":- table p/2.\np(X,X).\np(a,b).\n", "p(U,V)")
    assert set(sols) == {"p(_G0,_G0)", "p(a,b)"}


def test_tabled_call_instantiation_is_fresh_per_consumption():
    # consuming the non-ground answer twice must not alias variables
    sols, _ = solve(":- table p/1.\np(X).\n", "p(A),p(B)")
    assert sols == ["p(_G0),p(_G1)"]
