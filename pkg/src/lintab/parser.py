"""Parser for the clausal program dialect.

Grammar (UTF-8 source):

    :- table name/arity [lazy|eager].      table declaration
    head.                                  fact
    head :- goal, ..., goal.               rule
    % comment to end of line

Atoms and functors are lower-case identifiers, variables start with an
upper-case letter or underscore, integers are optionally signed digit
runs. Within one clause, variables get ids 0..n-1 in first-occurrence
order; `_` is fresh at every occurrence. Clauses are renamed apart at
activation time, not here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .terms import Atom, Integer, Struct, Term, Var


class ProgramSyntaxError(Exception):
    """Syntax error carrying 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class TableDeclaration:
    name: str
    arity: int
    strategy: Optional[str] = None  # None = engine default, else "lazy"/"eager"


@dataclass(frozen=True)
class Clause:
    head: Term
    body: tuple[Term, ...]
    nvars: int

    def __post_init__(self):
        if not isinstance(self.head, (Atom, Struct)):
            raise ValueError("clause head must be an atom or compound")


Item = Union[Clause, TableDeclaration]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>:-)
  | (?P<int>-?\d+)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),./])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProgramSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        tok_text = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, tok_text, line, m.start() - line_start + 1))
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + tok_text.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0
        self.varmap: dict[str, int] = {}
        self.nvars = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ProgramSyntaxError(message, tok.line, tok.col)

    def expect(self, kind: str, text: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        return self.advance()

    def fresh_var(self, name: str) -> Var:
        if name == "_":
            vid = self.nvars
            self.nvars += 1
            return Var(vid)
        vid = self.varmap.get(name)
        if vid is None:
            vid = self.nvars
            self.varmap[name] = vid
            self.nvars += 1
        return Var(vid)

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Integer(int(tok.text))
        if tok.kind == "var":
            self.advance()
            return self.fresh_var(tok.text)
        if tok.kind == "atom":
            self.advance()
            if self.peek().kind == "punct" and self.peek().text == "(":
                self.advance()
                args = [self.parse_term()]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.advance()
                    args.append(self.parse_term())
                self.expect("punct", ")")
                return Struct(tok.text, args)
            return Atom(tok.text)
        self.error("expected a term")

    def parse_goal(self) -> Term:
        tok = self.peek()
        t = self.parse_term()
        if not isinstance(t, (Atom, Struct)):
            self.error("goal must be an atom or compound", tok)
        return t

    def parse_declaration(self) -> TableDeclaration:
        self.expect("atom", "table")
        name_tok = self.expect("atom")
        self.expect("punct", "/")
        arity_tok = self.peek()
        if arity_tok.kind != "int" or int(arity_tok.text) < 0:
            self.error("declaration arity must be a non-negative integer")
        self.advance()
        strategy = None
        if self.peek().kind == "atom" and self.peek().text in ("lazy", "eager"):
            strategy = self.advance().text
        self.expect("punct", ".")
        return TableDeclaration(name_tok.text, int(arity_tok.text), strategy)

    def parse_clause_from(self, head_tok: _Token) -> Clause:
        self.varmap = {}
        self.nvars = 0
        head = self.parse_term()
        if not isinstance(head, (Atom, Struct)):
            self.error("clause head must be an atom or compound", head_tok)
        body: list[Term] = []
        tok = self.peek()
        if tok.kind == "arrow":
            self.advance()
            body.append(self.parse_goal())
            while self.peek().kind == "punct" and self.peek().text == ",":
                self.advance()
                body.append(self.parse_goal())
        self.expect("punct", ".")
        return Clause(head, tuple(body), self.nvars)

    def parse_items(self) -> list[Item]:
        items: list[Item] = []
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return items
            if tok.kind == "arrow":
                self.advance()
                items.append(self.parse_declaration())
            else:
                items.append(self.parse_clause_from(tok))


def parse_program(text: str) -> list[Item]:
    """Parse source text into declarations and clauses in source order."""
    return _Parser(_tokenize(text)).parse_items()


def parse_query(text: str) -> tuple[list[Term], int]:
    """Parse a comma-separated goal conjunction.

    Returns the goals plus the number of distinct variables (ids 0..n-1).
    """
    p = _Parser(_tokenize(text))
    goals = [p.parse_goal()]
    while p.peek().kind == "punct" and p.peek().text == ",":
        p.advance()
        goals.append(p.parse_goal())
    if p.peek().kind == "punct" and p.peek().text == ".":
        p.advance()
    if p.peek().kind != "eof":
        p.error("trailing input after query")
    return goals, p.nvars
