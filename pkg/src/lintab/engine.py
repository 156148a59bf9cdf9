"""The linear-tabling interpreter.

Depth-first resolution over generators: each goal solver is a generator
that yields once per solution (bindings live in a shared trail and are
undone on backtracking). Tabled calls dispatch on the entry state:

  * complete entries and evaluated entries are resolved from the table;
  * a call whose entry has a live pioneer activation is a follower: it
    consumes answers and then fails (early-promoting on exhaustion);
  * anything else is a pioneer. Lazy pioneers run rules to a fixpoint
    first (answers are withheld until clauses are exhausted, and for
    top-most looping subgoals until the whole cluster is complete), then
    return answers from the table. Eager pioneers consume existing
    answers first and then run rules, handing each new answer to the
    parent the moment it is stored.

Top-most looping subgoals are iterated in rounds until a round inserts
nothing new. Between rounds the cluster's answer regions are promoted,
which is what makes new-answers-only consumption (the semi-naive gate)
possible at call sites marked as last depending tabled subgoals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .analysis import (
    KIND_LAST_DEP_TABLED,
    KIND_PLAIN,
    AnnotatedProgram,
    pred_key,
)
from .parser import parse_query
from .table import (
    FROM_FIRST,
    FROM_NEW,
    AnswerCursor,
    SubgoalEntry,
    SubgoalStore,
    early_promote,
    insert_answer,
    mark_complete,
    promote_regions,
    register_subgoal,
)
from .terms import (
    Atom,
    Bindings,
    Integer,
    Struct,
    Term,
    Var,
    canonicalize,
    render,
    render_goals,
    renumber,
    unify,
    variables,
)

LAZY = "lazy"
EAGER = "eager"


class EngineError(Exception):
    pass


class StepBudgetExceeded(EngineError):
    """The run exceeded its resolution-step budget (nontermination suspect)."""


class InvariantViolation(EngineError):
    """An internal engine invariant failed (engine bug, not user error)."""


@dataclass
class EngineOptions:
    strategy: str = LAZY  # default; per-predicate declarations override
    semi_naive: bool = True
    early_promotion: bool = True
    dedup_solutions: bool = False
    limit: Optional[int] = None
    step_budget: int = 10**8

    def __post_init__(self):
        if self.strategy not in (LAZY, EAGER):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.early_promotion and not self.semi_naive:
            raise ValueError("early promotion requires semi-naive consumption")
        if self.step_budget <= 0:
            raise ValueError("step budget must be positive")


@dataclass
class RunStats:
    answers_produced: int = 0
    answers_consumed: int = 0
    clause_resolutions: int = 0
    steps: int = 0
    undefined_calls: int = 0
    entry_rounds: dict[str, int] = field(default_factory=dict)
    subgoal_count: int = 0
    max_iterations: int = 0
    average_iterations: float = 0.0

    def finalize(self, store: SubgoalStore) -> None:
        self.entry_rounds = {
            render(e.key): e.round_counter for e in store
        }
        rounds = list(self.entry_rounds.values())
        self.subgoal_count = len(rounds)
        self.max_iterations = max(rounds, default=0)
        self.average_iterations = (
            sum(rounds) / len(rounds) if rounds else 0.0
        )

    def as_dict(self) -> dict:
        return {
            "subgoals": self.subgoal_count,
            "max_its": self.max_iterations,
            "ave_its": round(self.average_iterations, 2),
            "answers_produced": self.answers_produced,
            "answers_consumed": self.answers_consumed,
            "clause_resolutions": self.clause_resolutions,
            "steps": self.steps,
            "undefined_calls": self.undefined_calls,
        }

    def as_lines(self) -> list[str]:
        d = self.as_dict()
        d["ave_its"] = f"{self.average_iterations:.2f}"
        return [f"{k}={v}" for k, v in d.items()]


class BodyContext:
    """Per-body-attempt state of a tabled activation's rule resolution.

    new_depth counts how many goals on the current path through the body
    are standing on a new (previous or current region) answer; the
    semi-naive gate only opens while it is zero.
    """

    __slots__ = ("entry", "new_depth")

    def __init__(self, entry: SubgoalEntry):
        self.entry = entry
        self.new_depth = 0


Query = Union[str, Iterable[Term]]


class Engine:
    """One evaluation run: owns the bindings trail, table store and stats."""

    def __init__(self, program: AnnotatedProgram, options: Optional[EngineOptions] = None):
        self.program = program
        self.opts = options or EngineOptions()
        self.bindings = Bindings()
        self.store = SubgoalStore()
        self.stats = RunStats()
        self.active_pioneers: list[SubgoalEntry] = []
        self._var_counter = 0
        self._started = False

    # -- public API ------------------------------------------------------

    def run(self, query: Query) -> Iterator[str]:
        """Pull-based solution stream; each item is the rendered query."""
        if isinstance(query, str):
            goals, nvars = parse_query(query)
        else:
            goals = list(query)
            ids = [v for g in goals for v in variables(g)]
            nvars = max(ids, default=-1) + 1
        off = self._fresh_block(nvars)
        goals = [renumber(g, off) for g in goals]
        return self._solutions(goals)

    # -- plumbing --------------------------------------------------------

    def _fresh_block(self, n: int) -> int:
        base = self._var_counter
        self._var_counter += n
        return base

    def _step(self) -> None:
        self.stats.steps += 1
        if self.stats.steps > self.opts.step_budget:
            raise StepBudgetExceeded(
                f"step budget {self.opts.step_budget} exhausted"
            )

    def _activate(self, clause):
        if clause.nvars == 0:
            return clause.head, clause.body
        off = self._fresh_block(clause.nvars)
        head = renumber(clause.head, off)
        body = tuple(renumber(g, off) for g in clause.body)
        return head, body

    def _call_index_key(self, goal: Term) -> Optional[tuple]:
        if type(goal) is Struct:
            a0 = self.bindings.deref(goal.args[0])
            if type(a0) is Atom:
                return ("a", a0.name)
            if type(a0) is Integer:
                return ("i", a0.value)
        return None

    def _instantiate(self, entry: SubgoalEntry, pos: int, ans: Term) -> Term:
        if entry.answers.ground[pos]:
            return ans
        mapping: dict[int, Var] = {}

        def walk(t: Term) -> Term:
            if type(t) is Var:
                v = mapping.get(t.id)
                if v is None:
                    v = Var(self._fresh_block(1))
                    mapping[t.id] = v
                return v
            if type(t) is Struct:
                return Struct(t.functor, [walk(a) for a in t.args])
            return t

        return walk(ans)

    # -- resolution ------------------------------------------------------

    def _solutions(self, goals: list[Term]) -> Iterator[str]:
        if self._started:
            raise EngineError("an Engine instance supports a single run")
        self._started = True
        seen: set[str] = set()
        count = 0
        kinds = tuple(KIND_PLAIN for _ in goals)
        try:
            for _ in self._solve_seq(goals, kinds, None, 0):
                text = render_goals(goals, self.bindings)
                if self.opts.dedup_solutions:
                    if text in seen:
                        continue
                    seen.add(text)
                yield text
                count += 1
                if self.opts.limit is not None and count >= self.opts.limit:
                    return
        finally:
            self.stats.finalize(self.store)

    def _solve_seq(self, goals, kinds, ctx, i):
        if i == len(goals):
            yield
            return
        for _ in self._solve_goal(goals[i], kinds[i], ctx):
            yield from self._solve_seq(goals, kinds, ctx, i + 1)

    def _solve_goal(self, goal, kind, ctx):
        goal = self.bindings.deref(goal)
        if not isinstance(goal, (Atom, Struct)):
            raise EngineError(f"goal is not callable: {render(goal, self.bindings)}")
        self._step()
        key = pred_key(goal)
        if self.program.is_tabled(key):
            yield from self._solve_tabled(goal, key, kind, ctx)
        else:
            yield from self._solve_plain(goal, key, ctx)

    def _solve_plain(self, goal, key, ctx):
        if key not in self.program.rules:
            # call to an undefined predicate: finite failure
            self.stats.undefined_calls += 1
            return
        b = self.bindings
        for ar in self.program.rules_for(key, self._call_index_key(goal)):
            self._step()
            self.stats.clause_resolutions += 1
            mark = b.mark()
            head, body = self._activate(ar.clause)
            if unify(goal, head, b):
                yield from self._solve_seq(body, ar.body_kinds, ctx, 0)
            b.undo(mark)

    # -- tabled resolution ----------------------------------------------

    def _solve_tabled(self, goal, key, kind, ctx):
        entry, _fresh = register_subgoal(self.store, goal, self.bindings)
        strategy = self.program.strategy(key, self.opts.strategy)
        if entry.complete:
            yield from self._consume(goal, entry, kind, ctx, promote=False)
            return
        if entry.evaluated:
            # the entry's cluster is still iterating: the caller depends on
            # it and must not complete before the cluster's top-most does
            self._join_cluster(entry)
            yield from self._consume(goal, entry, kind, ctx, promote=True)
            return
        if entry.pioneer_active:
            # follower: a loop (possibly fake, under eager) was found
            self._note_loop(entry, strategy)
            yield from self._consume(goal, entry, kind, ctx, promote=True)
            return
        # pioneer
        entry.pioneer_active = True
        self.active_pioneers.append(entry)
        try:
            if strategy == EAGER:
                yield from self._pioneer_eager(goal, key, entry, kind, ctx)
            else:
                self._pioneer_lazy_rules(goal, key, entry)
                entry.pioneer_active = False
                self._deactivate(entry)
                yield from self._consume(goal, entry, kind, ctx, promote=False)
        finally:
            entry.pioneer_active = False
            self._deactivate(entry)

    def _deactivate(self, entry):
        try:
            self.active_pioneers.remove(entry)
        except ValueError:
            pass

    def _find_top(self, entry: SubgoalEntry) -> SubgoalEntry:
        while entry.topmost is not None and entry.topmost is not entry:
            entry = entry.topmost
        return entry

    def _note_loop(self, entry: SubgoalEntry, strategy: str) -> None:
        if strategy == LAZY and entry not in self.active_pioneers:
            raise InvariantViolation(
                "lazy follower whose pioneer is not an ancestor on the path"
            )
        self._join_cluster(entry)

    def _join_cluster(self, entry: SubgoalEntry) -> None:
        """Merge every active pioneer below entry's top into its cluster."""
        actives = self.active_pioneers
        top = self._find_top(entry)
        try:
            start = actives.index(top)
        except ValueError:
            # the cluster's anchor already left the path (eager fake loop,
            # or an abandoned run): nothing on the path to merge above it
            start = actives.index(entry) if entry in actives else len(actives)
        for e in actives[start + 1 :]:
            self._merge(top, e)
        top.is_looping = True
        entry.is_looping = True

    def _merge(self, top: SubgoalEntry, e: SubgoalEntry) -> None:
        r = self._find_top(e)
        if r is not top:
            for x in (r, *r.dependents):
                x.topmost = top
                x.is_looping = True
                top.dependents.add(x)
            r.dependents.clear()
        if e is not top:
            e.topmost = top
            e.is_looping = True
            top.dependents.add(e)
        top.dependents.discard(top)

    def _reset_cluster(self, cluster) -> None:
        for e in cluster:
            promote_regions(e)
            e.evaluated = False
            e.revised = False

    def _pioneer_lazy_rules(self, goal, key, entry) -> None:
        """Rule resolution to fixpoint; yields nothing (memo always fails)."""
        while True:
            entry.round_counter += 1
            self._run_rules_lazy(goal, key, entry)
            # check_completion
            if not entry.is_looping:
                mark_complete(entry)
                return
            top = self._find_top(entry)
            if top is entry:
                cluster = [entry, *entry.dependents]
                if any(e.revised for e in cluster):
                    self._reset_cluster(cluster)
                    continue
                mark_complete(entry)
                return
            entry.evaluated = True
            return

    def _run_rules_lazy(self, goal, key, entry) -> None:
        b = self.bindings
        skip_base = self.opts.semi_naive and entry.round_counter >= 2
        for ar in self.program.rules_for(key, self._call_index_key(goal)):
            if skip_base and ar.base_rule:
                continue
            self._step()
            self.stats.clause_resolutions += 1
            mark = b.mark()
            head, body = self._activate(ar.clause)
            if unify(goal, head, b):
                bctx = BodyContext(entry)
                for _ in self._solve_seq(body, ar.body_kinds, bctx, 0):
                    # memo: store the answer, then fail into backtracking
                    if insert_answer(entry, canonicalize(goal, b)):
                        self.stats.answers_produced += 1
            b.undo(mark)

    def _pioneer_eager(self, goal, key, entry, kind, ctx):
        b = self.bindings
        while True:
            entry.round_counter += 1
            # answers first, then rules
            yield from self._consume(goal, entry, kind, ctx, promote=False)
            skip_base = self.opts.semi_naive and entry.round_counter >= 2
            for ar in self.program.rules_for(key, self._call_index_key(goal)):
                if skip_base and ar.base_rule:
                    continue
                self._step()
                self.stats.clause_resolutions += 1
                mark = b.mark()
                head, body = self._activate(ar.clause)
                if unify(goal, head, b):
                    bctx = BodyContext(entry)
                    for _ in self._solve_seq(body, ar.body_kinds, bctx, 0):
                        if insert_answer(entry, canonicalize(goal, b)):
                            self.stats.answers_produced += 1
                            # memo succeeds: return the new answer upward
                            if ctx is not None:
                                ctx.new_depth += 1
                            try:
                                yield
                            finally:
                                if ctx is not None:
                                    ctx.new_depth -= 1
                        # a duplicate was returned before: fail
                b.undo(mark)
            # check_completion never returns answers under eager
            if not entry.is_looping:
                mark_complete(entry)
                return
            top = self._find_top(entry)
            if top is entry:
                cluster = [entry, *entry.dependents]
                if any(e.revised for e in cluster):
                    self._reset_cluster(cluster)
                    continue
                mark_complete(entry)
                return
            entry.evaluated = True
            return

    def _cursor_mode(self, entry, kind, ctx) -> str:
        if (
            self.opts.semi_naive
            and kind == KIND_LAST_DEP_TABLED
            and ctx is not None
            and ctx.entry.round_counter >= 2
            and ctx.new_depth == 0
        ):
            return FROM_NEW
        return FROM_FIRST

    def _consume(self, goal, entry, kind, ctx, promote):
        b = self.bindings
        cur = AnswerCursor(entry, self._cursor_mode(entry, kind, ctx))
        while True:
            item = cur.next_pos()
            if item is None:
                break
            pos, ans = item
            self._step()
            mark = b.mark()
            if unify(goal, self._instantiate(entry, pos, ans), b):
                self.stats.answers_consumed += 1
                is_new = pos >= entry.last_old
                if is_new and ctx is not None:
                    ctx.new_depth += 1
                try:
                    yield
                finally:
                    if is_new and ctx is not None:
                        ctx.new_depth -= 1
            b.undo(mark)
        if (
            promote
            and self.opts.early_promotion
            and not entry.complete
            and not entry.promoted_this_round
        ):
            early_promote(entry)


def run_query(
    program: AnnotatedProgram, query: Query, options: Optional[EngineOptions] = None
) -> tuple[list[str], Engine]:
    """Run to exhaustion; returns (solutions in emission order, engine)."""
    eng = Engine(program, options)
    return list(eng.run(query)), eng
