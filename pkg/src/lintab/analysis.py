"""Static analysis: call graph, level mapping, and per-rule annotations.

The level mapping stratifies predicates by the SCC condensation of the
call graph: predicates in one SCC share a level, and a predicate's level
is strictly above everything it calls outside its own SCC. Rule
annotations mark the last depending subgoal (the rightmost body goal at
the head's level) and base rules (no depending subgoal at all), which is
what the engine's semi-naive gating consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .parser import Clause, Item, TableDeclaration
from .terms import Atom, Integer, Struct, Term

PredKey = tuple[str, int]

# body call-site kinds
KIND_LAST_DEP_TABLED = "tabled-last-depending"
KIND_TABLED = "tabled"
KIND_PLAIN = "nontabled"


def pred_key(t: Term) -> PredKey:
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Struct):
        return (t.functor, len(t.args))
    raise TypeError(f"not a callable term: {t!r}")


@dataclass(frozen=True)
class AnnotatedRule:
    clause: Clause
    tabled_head: bool
    last_depending_index: Optional[int]
    base_rule: bool
    body_kinds: tuple[str, ...]
    first_arg_key: Optional[tuple] = None


@dataclass
class AnnotatedProgram:
    rules: dict[PredKey, tuple[AnnotatedRule, ...]]
    tabled: dict[PredKey, Optional[str]]  # declared strategy, None = default
    levels: dict[PredKey, int]
    _buckets: dict[PredKey, dict] = field(default_factory=dict, repr=False)
    _unindexed: dict[PredKey, tuple] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        # first-argument clause indexing: calls with a bound atomic first
        # argument only scan clauses that can match it
        for key, rules in self.rules.items():
            buckets: dict[tuple, tuple[AnnotatedRule, ...]] = {}
            keys = {r.first_arg_key for r in rules if r.first_arg_key is not None}
            for k in keys:
                buckets[k] = tuple(
                    r for r in rules if r.first_arg_key in (None, k)
                )
            self._buckets[key] = buckets
            self._unindexed[key] = tuple(
                r for r in rules if r.first_arg_key is None
            )

    def is_tabled(self, key: PredKey) -> bool:
        return key in self.tabled

    def strategy(self, key: PredKey, default: str) -> str:
        declared = self.tabled.get(key)
        return declared if declared is not None else default

    def rules_for(
        self, key: PredKey, first_key: Optional[tuple] = None
    ) -> tuple[AnnotatedRule, ...]:
        rules = self.rules.get(key)
        if rules is None:
            return ()
        if first_key is None:
            return rules
        bucket = self._buckets[key].get(first_key)
        if bucket is not None:
            return bucket
        return self._unindexed[key]

    def report(self) -> str:
        """Deterministic text dump of levels and rule annotations."""
        lines = []
        for key in sorted(self.levels):
            name, arity = key
            lines.append(f"{name}/{arity} level={self.levels[key]}")
            if key in self.tabled:
                for k, r in enumerate(self.rules.get(key, ())):
                    ld = (
                        "none"
                        if r.last_depending_index is None
                        else str(r.last_depending_index)
                    )
                    base = "true" if r.base_rule else "false"
                    lines.append(f"  rule#{k} last_depending={ld} base={base}")
        return "\n".join(lines)


def build_call_graph(clauses: Iterable[Clause]) -> "nx.DiGraph":
    """Directed predicate graph: edge p -> q iff q occurs in a body of p."""
    g = nx.DiGraph()
    for c in clauses:
        hk = pred_key(c.head)
        g.add_node(hk)
        for goal in c.body:
            bk = pred_key(goal)
            g.add_node(bk)
            g.add_edge(hk, bk)
    return g


def level_mapping(graph: "nx.DiGraph") -> dict[PredKey, int]:
    """Assign each SCC the length of its longest path to a sink.

    Predicates with no clauses (including undefined ones) are sinks and
    land on level 0.
    """
    cond = nx.condensation(graph)
    scc_level: dict[int, int] = {}
    for node in reversed(list(nx.topological_sort(cond))):
        succs = list(cond.successors(node))
        scc_level[node] = 1 + max((scc_level[s] for s in succs), default=-1)
    levels: dict[PredKey, int] = {}
    for node, data in cond.nodes(data=True):
        for pred in data["members"]:
            levels[pred] = scc_level[node]
    return levels


def _first_arg_key(head: Term) -> Optional[tuple]:
    if isinstance(head, Struct):
        a0 = head.args[0]
        if isinstance(a0, Atom):
            return ("a", a0.name)
        if isinstance(a0, Integer):
            return ("i", a0.value)
    return None


def annotate(
    clauses: Iterable[Clause],
    declarations: Iterable[TableDeclaration],
    levels: dict[PredKey, int],
) -> AnnotatedProgram:
    """Group rules per predicate and attach semi-naive annotations.

    Duplicate table declarations are accepted idempotently (a later
    explicit strategy wins). Declaring a predicate with no clauses is
    legal: the call fails finitely with an immediately-complete table.
    """
    tabled: dict[PredKey, Optional[str]] = {}
    for d in declarations:
        key = (d.name, d.arity)
        if d.strategy is not None or key not in tabled:
            tabled[key] = d.strategy

    grouped: dict[PredKey, list[AnnotatedRule]] = {}
    for c in clauses:
        hk = pred_key(c.head)
        grouped.setdefault(hk, [])
        if hk in tabled:
            head_level = levels[hk]
            last_dep = None
            for i, goal in enumerate(c.body):
                if levels.get(pred_key(goal), 0) == head_level:
                    last_dep = i
            kinds = []
            for i, goal in enumerate(c.body):
                gk = pred_key(goal)
                if gk in tabled:
                    if i == last_dep:
                        kinds.append(KIND_LAST_DEP_TABLED)
                    else:
                        kinds.append(KIND_TABLED)
                else:
                    kinds.append(KIND_PLAIN)
            rule = AnnotatedRule(
                clause=c,
                tabled_head=True,
                last_depending_index=last_dep,
                base_rule=last_dep is None,
                body_kinds=tuple(kinds),
                first_arg_key=_first_arg_key(c.head),
            )
        else:
            rule = AnnotatedRule(
                clause=c,
                tabled_head=False,
                last_depending_index=None,
                base_rule=False,
                body_kinds=tuple(KIND_PLAIN for _ in c.body),
                first_arg_key=_first_arg_key(c.head),
            )
        grouped[hk].append(rule)

    for key in tabled:
        grouped.setdefault(key, [])

    return AnnotatedProgram(
        rules={k: tuple(v) for k, v in grouped.items()},
        tabled=tabled,
        levels=levels,
    )


def analyze(items: Iterable[Item]) -> AnnotatedProgram:
    clauses = [i for i in items if isinstance(i, Clause)]
    decls = [i for i in items if isinstance(i, TableDeclaration)]
    graph = build_call_graph(clauses)
    for d in decls:
        graph.add_node((d.name, d.arity))
    levels = level_mapping(graph)
    return annotate(clauses, decls, levels)


def verify_level_mapping(
    clauses: Iterable[Clause], levels: dict[PredKey, int]
) -> bool:
    """Check the defining bidirectional property on every rule."""
    graph = build_call_graph(clauses)
    reach: dict[PredKey, set] = {
        n: nx.descendants(graph, n) | {n} for n in graph.nodes
    }
    for c in clauses:
        hk = pred_key(c.head)
        for goal in c.body:
            bk = pred_key(goal)
            calls_back = hk in reach.get(bk, set())
            mh = levels[hk]
            mb = levels[bk]
            if (mh > mb) != (not calls_back):
                return False
            if (mh == mb) != calls_back:
                return False
    return True
