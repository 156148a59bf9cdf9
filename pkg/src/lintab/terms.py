"""Logic terms, unification over a rollback trail, and term relations.

Terms are immutable values: variables (integer ids), atoms, integers and
compounds. All mutation lives in a `Bindings` object that records a trail
so the engine can undo bindings on backtracking.
"""

from __future__ import annotations

from typing import Iterator, Optional


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __repr__(self):
        return f"_{self.id}"

    def __eq__(self, other):
        return type(other) is Var and other.id == self.id

    def __hash__(self):
        return hash(("v", self.id))


class Atom(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not name:
            raise ValueError("atom name must be non-empty")
        self.name = name

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(other) is Atom and other.name == self.name

    def __hash__(self):
        return hash(("a", self.name))


class Integer(Term):
    __slots__ = ("value",)

    def __init__(self, value: int):
        self.value = value

    def __repr__(self):
        return str(self.value)

    def __eq__(self, other):
        return type(other) is Integer and other.value == self.value

    def __hash__(self):
        return hash(("i", self.value))


class Struct(Term):
    __slots__ = ("functor", "args")

    def __init__(self, functor: str, args):
        args = tuple(args)
        if not functor:
            raise ValueError("functor must be non-empty")
        if not args:
            raise ValueError("compound term needs at least one argument")
        self.functor = functor
        self.args = args

    def __repr__(self):
        return f"{self.functor}({','.join(map(repr, self.args))})"

    def __eq__(self, other):
        return (
            type(other) is Struct
            and other.functor == self.functor
            and other.args == self.args
        )

    def __hash__(self):
        return hash(("s", self.functor, self.args))


class Bindings:
    """A substitution plus a trail supporting rollback to a checkpoint."""

    __slots__ = ("_map", "_trail")

    def __init__(self):
        self._map: dict[int, Term] = {}
        self._trail: list[int] = []

    def mark(self) -> int:
        return len(self._trail)

    def undo(self, mark: int) -> None:
        trail = self._trail
        m = self._map
        while len(trail) > mark:
            del m[trail.pop()]

    def bind(self, vid: int, t: Term) -> None:
        # a bound variable is never re-bound without an intervening undo
        assert vid not in self._map
        self._map[vid] = t
        self._trail.append(vid)

    def deref(self, t: Term) -> Term:
        m = self._map
        while type(t) is Var:
            nxt = m.get(t.id)
            if nxt is None:
                return t
            t = nxt
        return t

    def snapshot(self) -> dict[int, Term]:
        return dict(self._map)

    def __len__(self):
        return len(self._map)


def unify(t1: Term, t2: Term, b: Bindings) -> bool:
    """Extend b to a most-general unifier of t1 and t2.

    On failure the bindings are rolled back to the pre-call state. No
    occurs-check: the dialect is Datalog-like and never constructs cyclic
    terms.
    """
    mark = b.mark()
    stack = [(t1, t2)]
    while stack:
        a, c = stack.pop()
        a = b.deref(a)
        c = b.deref(c)
        ta = type(a)
        tc = type(c)
        if ta is Var:
            if tc is Var and c.id == a.id:
                continue
            b.bind(a.id, c)
        elif tc is Var:
            b.bind(c.id, a)
        elif ta is Atom:
            if tc is not Atom or a.name != c.name:
                b.undo(mark)
                return False
        elif ta is Integer:
            if tc is not Integer or a.value != c.value:
                b.undo(mark)
                return False
        else:  # Struct
            if (
                tc is not Struct
                or a.functor != c.functor
                or len(a.args) != len(c.args)
            ):
                b.undo(mark)
                return False
            stack.extend(zip(a.args, c.args))
    return True


def canonicalize(t: Term, b: Optional[Bindings] = None) -> Term:
    """Renumber variables 0,1,2,... in first-occurrence order.

    Dereferences through b when given, so the result is a standalone copy
    usable as a table key or stored answer. Idempotent.
    """
    mapping: dict[int, Var] = {}

    def walk(t: Term) -> Term:
        if b is not None:
            t = b.deref(t)
        tt = type(t)
        if tt is Var:
            v = mapping.get(t.id)
            if v is None:
                v = Var(len(mapping))
                mapping[t.id] = v
            return v
        if tt is Struct:
            return Struct(t.functor, [walk(a) for a in t.args])
        return t

    return walk(t)


def resolve(t: Term, b: Bindings) -> Term:
    """Apply b fully to t, returning a standalone copy."""
    t = b.deref(t)
    if type(t) is Struct:
        return Struct(t.functor, [resolve(a, b) for a in t.args])
    return t


def variables(t: Term, b: Optional[Bindings] = None) -> list[int]:
    """Variable ids in first-occurrence order (after deref through b)."""
    seen: list[int] = []

    def walk(t: Term) -> None:
        if b is not None:
            t = b.deref(t)
        tt = type(t)
        if tt is Var:
            if t.id not in seen:
                seen.append(t.id)
        elif tt is Struct:
            for a in t.args:
                walk(a)

    walk(t)
    return seen


def is_ground(t: Term) -> bool:
    tt = type(t)
    if tt is Var:
        return False
    if tt is Struct:
        return all(is_ground(a) for a in t.args)
    return True


def is_variant(t1: Term, t2: Term) -> bool:
    """True iff t1 and t2 are identical up to variable renaming."""
    return canonicalize(t1) == canonicalize(t2)


def subsumes(t1: Term, t2: Term) -> bool:
    """One-way matching: does a substitution theta exist with t1*theta == t2?

    t2's variables are treated as constants; t1 and t2 must not share
    variables.
    """
    theta: dict[int, Term] = {}

    def match(a: Term, c: Term) -> bool:
        ta = type(a)
        if ta is Var:
            bound = theta.get(a.id)
            if bound is None:
                theta[a.id] = c
                return True
            return bound == c
        if ta is not type(c):
            return False
        if ta is Atom:
            return a.name == c.name
        if ta is Integer:
            return a.value == c.value
        return (
            a.functor == c.functor
            and len(a.args) == len(c.args)
            and all(match(x, y) for x, y in zip(a.args, c.args))
        )

    return match(t1, t2)


def render(
    t: Term,
    b: Optional[Bindings] = None,
    names: Optional[dict[int, str]] = None,
) -> str:
    """Deterministic text form after applying b.

    Unbound variables print as _G<n>, numbered in first-occurrence order;
    pass a shared `names` dict to keep numbering stable across several
    terms of one solution.
    """
    if names is None:
        names = {}
    parts: list[str] = []

    def walk(t: Term) -> None:
        if b is not None:
            t = b.deref(t)
        tt = type(t)
        if tt is Var:
            name = names.get(t.id)
            if name is None:
                name = f"_G{len(names)}"
                names[t.id] = name
            parts.append(name)
        elif tt is Atom:
            parts.append(t.name)
        elif tt is Integer:
            parts.append(str(t.value))
        else:
            parts.append(t.functor)
            parts.append("(")
            for i, a in enumerate(t.args):
                if i:
                    parts.append(",")
                walk(a)
            parts.append(")")

    walk(t)
    return "".join(parts)


def render_goals(goals, b: Optional[Bindings] = None) -> str:
    """Render a conjunction with one shared unbound-variable numbering."""
    names: dict[int, str] = {}
    return ",".join(render(g, b, names) for g in goals)


def renumber(t: Term, offset: int) -> Term:
    """Shift every variable id by offset (clause activation renaming)."""
    tt = type(t)
    if tt is Var:
        return Var(t.id + offset)
    if tt is Struct:
        return Struct(t.functor, [renumber(a, offset) for a in t.args])
    return t


def iter_subterms(t: Term) -> Iterator[Term]:
    yield t
    if type(t) is Struct:
        for a in t.args:
            yield from iter_subterms(a)
