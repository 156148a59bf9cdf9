"""Brute-force reference evaluator: naive bottom-up least fixpoint.

Ground truth for answer sets on desk-scale instances. Deliberately naive
(every pass re-derives everything from the model so far) to stay as
independent as possible from the engine: the only shared code is the
term/parser layer.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .analysis import PredKey, pred_key
from .corpus import datalog_program
from .generate import chain_facts, cycle_facts, random_graph_facts
from .parser import Clause, Item, parse_program, parse_query
from .terms import (
    Atom,
    Integer,
    Struct,
    Term,
    Var,
    is_ground,
    iter_subterms,
    render_goals,
    subsumes,
    variables,
)


class OracleInapplicable(Exception):
    """The program falls outside the range-restricted fragment."""


Model = dict[PredKey, list[Term]]


def _check_range_restricted(clauses: Iterable[Clause]) -> None:
    for c in clauses:
        body_vars = {v for g in c.body for v in variables(g)}
        missing = [v for v in variables(c.head) if v not in body_vars]
        if missing:
            raise OracleInapplicable(
                f"head variable not bound by the body in clause {c.head!r}"
            )


def _substitute(t: Term, theta: dict[int, Term]) -> Term:
    tt = type(t)
    if tt is Var:
        return theta.get(t.id, t)
    if tt is Struct:
        return Struct(t.functor, [_substitute(a, theta) for a in t.args])
    return t


def _match(pattern: Term, fact: Term, theta: dict[int, Term], bound: list[int]) -> bool:
    """Match pattern against a ground fact, extending theta (trailing keys
    into `bound` so callers can undo)."""
    tp = type(pattern)
    if tp is Var:
        existing = theta.get(pattern.id)
        if existing is None:
            theta[pattern.id] = fact
            bound.append(pattern.id)
            return True
        return existing == fact
    if tp is Atom:
        return type(fact) is Atom and fact.name == pattern.name
    if tp is Integer:
        return type(fact) is Integer and fact.value == pattern.value
    # Struct
    return (
        type(fact) is Struct
        and fact.functor == pattern.functor
        and len(fact.args) == len(pattern.args)
        and all(
            _match(p, f, theta, bound) for p, f in zip(pattern.args, fact.args)
        )
    )


def _match_body(
    goals: tuple[Term, ...], i: int, model: Model, theta: dict[int, Term]
):
    if i == len(goals):
        yield theta
        return
    goal = goals[i]
    for fact in model.get(pred_key(goal), ()):
        bound: list[int] = []
        if _match(goal, fact, theta, bound):
            yield from _match_body(goals, i + 1, model, theta)
        for vid in bound:
            del theta[vid]


def _herbrand_bound(clauses: list[Clause]) -> int:
    consts = set()
    preds = set()
    for c in clauses:
        for t in (c.head, *c.body):
            preds.add(pred_key(t))
            for s in iter_subterms(t):
                if isinstance(s, (Atom, Integer)):
                    consts.add(s)
    k = max(len(consts), 1)
    bound = 0
    for _, arity in preds:
        bound += k ** min(arity, 8)
    return bound


def oracle_model(items: Iterable[Item]) -> Model:
    """Least model of all predicates by naive iteration to fixpoint."""
    clauses = [i for i in items if isinstance(i, Clause)]
    _check_range_restricted(clauses)
    model: Model = {}
    seen: set[tuple[PredKey, Term]] = set()
    bound = _herbrand_bound(clauses)
    iterations = 0
    changed = True
    while changed:
        iterations += 1
        if iterations > bound + 1:
            raise AssertionError("naive fixpoint exceeded the Herbrand bound")
        changed = False
        new_facts: list[tuple[PredKey, Term]] = []
        for c in clauses:
            hk = pred_key(c.head)
            for theta in _match_body(c.body, 0, model, {}):
                fact = _substitute(c.head, theta)
                assert is_ground(fact)
                if (hk, fact) not in seen:
                    seen.add((hk, fact))
                    new_facts.append((hk, fact))
        for hk, fact in new_facts:
            model.setdefault(hk, []).append(fact)
            changed = True
    return model


def oracle_solve(
    items_or_text: Union[str, Iterable[Item]],
    query: Union[str, list[Term]],
) -> set[str]:
    """Ground solutions of the query against the least model, rendered."""
    items = (
        parse_program(items_or_text)
        if isinstance(items_or_text, str)
        else list(items_or_text)
    )
    goals = parse_query(query)[0] if isinstance(query, str) else list(query)
    model = oracle_model(items)
    out = set()
    for theta in _match_body(tuple(goals), 0, model, {}):
        out.add(render_goals([_substitute(g, theta) for g in goals]))
    return out


def answers_for_key(model: Model, key: Term) -> frozenset[Term]:
    """Model facts that are instances of a canonical subgoal key."""
    facts = model.get(pred_key(key), ())
    return frozenset(f for f in facts if subsumes(key, f))


def random_instance(
    seed: int,
    kind: str,
    graph: str,
    n: int,
    m: Optional[int] = None,
) -> tuple[str, str]:
    """Deterministic (program text, query) for a Datalog benchmark shape.

    kind in {tcl, tcr, tcn, sg}; graph in {chain, cycle, random} (random
    needs the edge count m).
    """
    if graph == "chain":
        facts = chain_facts(n, pred="edge")
    elif graph == "cycle":
        facts = cycle_facts(n, pred="edge")
    elif graph == "random":
        if m is None:
            raise ValueError("random graphs need an edge count")
        facts = random_graph_facts(n, m, seed, pred="edge")
    else:
        raise ValueError(f"unknown graph kind {graph!r}")
    return datalog_program(kind, facts, n)
