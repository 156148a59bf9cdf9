"""Static analysis: call graph, level mapping, rule annotations."""

import lintab.corpus as corpus
from lintab.analysis import (
    KIND_LAST_DEP_TABLED,
    KIND_PLAIN,
    KIND_TABLED,
    analyze,
    build_call_graph,
    level_mapping,
    verify_level_mapping,
)
from lintab.parser import Clause, parse_program


def _clauses(text):
    return [i for i in parse_program(text) if isinstance(i, Clause)]


def test_call_graph_edges():
    g = build_call_graph(_clauses("p(X) :- q(X), r(X).\nq(X) :- p(X).\nr(a).\n"))
    assert set(g.edges) == {
        (("p", 1), ("q", 1)),
        (("p", 1), ("r", 1)),
        (("q", 1), ("p", 1)),
    }


def test_level_mapping_stratifies():
    cs = _clauses(corpus.LEFT_RECURSIVE_TC)
    levels = level_mapping(build_call_graph(cs))
    assert levels[("p", 2)] == 1
    assert levels[("e", 2)] == 0
    assert verify_level_mapping(cs, levels)


def test_level_mapping_mutual_recursion_same_level():
    cs = _clauses(corpus.FRESH_SUBGOAL_GUARD)
    levels = level_mapping(build_call_graph(cs))
    assert levels[("p", 2)] == levels[("q", 2)]
    assert levels[("t", 2)] < levels[("p", 2)]
    assert verify_level_mapping(cs, levels)


def test_level_mapping_verifier_rejects_wrong_levels():
    cs = _clauses(corpus.LEFT_RECURSIVE_TC)
    assert not verify_level_mapping(cs, {("p", 2): 0, ("e", 2): 0})
    assert not verify_level_mapping(cs, {("p", 2): 0, ("e", 2): 1})


def test_annotations_left_recursive_tc():
    prog = analyze(parse_program(corpus.LEFT_RECURSIVE_TC))
    rec, base = prog.rules[("p", 2)]
    assert rec.last_depending_index == 0 and not rec.base_rule
    assert rec.body_kinds == (KIND_LAST_DEP_TABLED, KIND_PLAIN)
    assert base.last_depending_index is None and base.base_rule
    assert prog.is_tabled(("p", 2)) and not prog.is_tabled(("e", 2))


def test_annotation_untabled_helper_blocks_gate():
    # the last depending body goal is the non-tabled helper q, so no call
    # site in the matcher rules is marked as a gated consumer
    prog = analyze(parse_program(corpus.STRING_MATCHER_UNTABLED_STEP + "c(0,a,1).\n"))
    for r in prog.rules[("p", 2)]:
        assert KIND_LAST_DEP_TABLED not in r.body_kinds
    # whereas the directly-tabled twin gates its first body goal
    prog2 = analyze(parse_program(corpus.STRING_MATCHER + "c(0,a,1).\n"))
    gated = [r for r in prog2.rules[("p", 2)] if r.body_kinds[:1] == (KIND_LAST_DEP_TABLED,)]
    assert len(gated) == 2


def test_annotation_mutual_recursion_kinds():
    prog = analyze(parse_program(corpus.FRESH_SUBGOAL_GUARD))
    rules = prog.rules[("p", 2)]
    # p(X,Y) :- p(X,Z), q(Z,Y): q is the last depending goal and tabled
    assert rules[0].body_kinds == (KIND_TABLED, KIND_LAST_DEP_TABLED)
    # p(b,c) :- p(X,Y): single depending goal
    assert rules[1].body_kinds == (KIND_LAST_DEP_TABLED,)
    assert not rules[1].base_rule
    # p(a,b): base
    assert rules[2].base_rule


def test_strategy_resolution():
    prog = analyze(parse_program(":- table p/1 eager.\n:- table q/1.\np(a).\nq(a).\n"))
    assert prog.strategy(("p", 1), "lazy") == "eager"
    assert prog.strategy(("q", 1), "lazy") == "lazy"
    assert prog.strategy(("q", 1), "eager") == "eager"


def test_duplicate_declarations_later_explicit_wins():
    prog = analyze(parse_program(":- table p/1.\n:- table p/1 eager.\np(a).\n"))
    assert prog.tabled[("p", 1)] == "eager"


def test_declared_predicate_without_clauses():
    prog = analyze(parse_program(":- table p/2.\nq(a).\n"))
    assert prog.is_tabled(("p", 2))
    assert prog.rules_for(("p", 2), None) == ()


def test_first_argument_indexing_buckets():
    prog = analyze(parse_program("e(a,b).\ne(b,c).\ne(X,X).\n"))
    names = lambda rs: [r.clause.head.args[0] for r in rs]
    from lintab.terms import Atom, Var

    assert names(prog.rules_for(("e", 2), ("a", "a"))) == [Atom("a"), Var(0)]
    assert names(prog.rules_for(("e", 2), ("a", "zzz"))) == [Var(0)]
    assert len(prog.rules_for(("e", 2), None)) == 3


def test_report_format_and_determinism():
    text = corpus.LEFT_RECURSIVE_TC
    rep = analyze(parse_program(text)).report()
    assert rep == analyze(parse_program(text)).report()
    lines = rep.splitlines()
    assert "e/2 level=0" in lines
    assert "p/2 level=1" in lines
    assert "  rule#0 last_depending=0 base=false" in lines
    assert "  rule#1 last_depending=none base=true" in lines
