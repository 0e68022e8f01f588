"""Formula syntax: propositional formulas, non-nested conditional formulas, parser.

Grammar (ASCII forms, unicode alternatives in brackets)::

    formula  := iff
    iff      := imp ( '<->' [↔] imp )*
    imp      := or ( '->' [→] imp )?            right associative
    or       := and ( '\\/' [∨] and )*
    and      := unary ( '/\\' [∧] unary )*
    unary    := '~' [¬] unary | primary
    primary  := IDENT | 'T' [⊤] | 'F' [⊥] | '(' formula ')'
              | '(' formula '|' formula ')'     conditional level only

At the conditional level a bare propositional primary ``p`` stands for
``(p | T)``.  The bar may not occur inside either side of a conditional.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import ParseError

RESERVED = frozenset({"T", "F"})


class Formula:
    """Common base of every AST node; supplies operator sugar."""

    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def implies(self, other):
        return Implies(self, other)

    def iff(self, other):
        return Iff(self, other)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True, repr=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Basic(Formula):
    """The basic conditional ``(consequent | antecedent)`` over propositional formulas."""

    consequent: Formula
    antecedent: Formula


TOP = Const(True)
BOTTOM = Const(False)

_BINARY = (And, Or, Implies, Iff)


def is_propositional(f: Formula) -> bool:
    if isinstance(f, (Var, Const)):
        return True
    if isinstance(f, Basic):
        return False
    if isinstance(f, Not):
        return is_propositional(f.arg)
    return is_propositional(f.left) and is_propositional(f.right)


def variables(f: Formula) -> set[str]:
    """Names of all variables occurring in ``f`` (both sides of basics included)."""
    if not isinstance(f, Formula):
        return set()  # non-syntactic leaf such as an event
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Basic):
        return variables(f.consequent) | variables(f.antecedent)
    if isinstance(f, Not):
        return variables(f.arg)
    return variables(f.left) | variables(f.right)


def basics(f: Formula) -> Iterator[Basic]:
    """Leaves of a conditional formula, left to right."""
    if isinstance(f, Basic):
        yield f
    elif isinstance(f, Not):
        yield from basics(f.arg)
    elif isinstance(f, _BINARY):
        yield from basics(f.left)
        yield from basics(f.right)


def evaluate(f: Formula, valuation: Mapping[str, bool]) -> bool:
    """Classical truth value of a propositional formula under ``valuation``."""
    if isinstance(f, Var):
        try:
            return bool(valuation[f.name])
        except KeyError:
            raise KeyError(f"unknown variable {f.name!r}") from None
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, valuation)
    if isinstance(f, And):
        return evaluate(f.left, valuation) and evaluate(f.right, valuation)
    if isinstance(f, Or):
        return evaluate(f.left, valuation) or evaluate(f.right, valuation)
    if isinstance(f, Implies):
        return (not evaluate(f.left, valuation)) or evaluate(f.right, valuation)
    if isinstance(f, Iff):
        return evaluate(f.left, valuation) == evaluate(f.right, valuation)
    raise TypeError(f"not a propositional formula: {f!r}")


def conjoin(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return TOP
    out = formulas[0]
    for g in formulas[1:]:
        out = And(out, g)
    return out


def disjoin(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return BOTTOM
    out = formulas[0]
    for g in formulas[1:]:
        out = Or(out, g)
    return out


# -- rendering ---------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "\\/", And: "/\\"}


def render(f: Formula) -> str:
    """Render ``f`` in the ASCII grammar; ``parse(render(f))`` gives back ``f``."""
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Basic):
        return f"({_render(f.consequent, 0)} | {_render(f.antecedent, 0)})"
    if isinstance(f, Not):
        return "~" + _render(f.arg, 5)
    prec = _PREC[type(f)]
    if isinstance(f, Implies):
        body = f"{_render(f.left, prec + 1)} -> {_render(f.right, prec)}"
    else:
        body = f"{_render(f.left, prec)} {_SYMBOL[type(f)]} {_render(f.right, prec + 1)}"
    return f"({body})" if prec < ctx or (prec == ctx and ctx > 0 and isinstance(f, Implies)) else body


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<nmc>\|~)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<and>/\\|∧)
  | (?P<or>\\/|∨)
  | (?P<not>~|¬)
  | (?P<bar>\|)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<top>⊤)
  | (?P<bot>⊥)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in RESERVED:
                kind = "top" if word == "T" else "bot"
            tokens.append(Token(kind, word, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


# -- parser ------------------------------------------------------------------


def _split_nmc(t: Token) -> list[Token]:
    if t.kind != "nmc":
        return [t]
    return [Token("bar", "|", t.pos), Token("not", "~", t.pos + 1)]


class _Parser:
    def __init__(self, text: str, consequence: bool = False):
        self.text = text
        self.tokens = tokenize(text)
        if not consequence:
            # outside consequence queries "(a|~b)" is a bar followed by a negation
            self.tokens = [part for t in self.tokens for part in _split_nmc(t)]
        self.i = 0
        self.inside_basic = False

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what}, found {self._describe(self.tok)}")
        return self.advance()

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, self.text)

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def matching_paren(self, start: int) -> int:
        depth = 0
        for j in range(start, len(self.tokens)):
            kind = self.tokens[j].kind
            if kind == "lpar":
                depth += 1
            elif kind == "rpar":
                depth -= 1
                if depth == 0:
                    return j
        raise ParseError("unbalanced parenthesis", self.tokens[start].pos, self.text)

    def has_top_level_bar(self, start: int, end: int) -> bool:
        depth = 0
        for j in range(start + 1, end):
            kind = self.tokens[j].kind
            if kind == "lpar":
                depth += 1
            elif kind == "rpar":
                depth -= 1
            elif kind == "bar" and depth == 0:
                return True
        return False

    # Both levels share the connective layer; ``cond`` selects the primary rule.
    def formula(self, cond: bool) -> Formula:
        left = self.imp(cond)
        while self.tok.kind == "iff":
            self.advance()
            left = Iff(left, self.imp(cond))
        return left

    def imp(self, cond: bool) -> Formula:
        left = self.disj(cond)
        if self.tok.kind == "imp":
            self.advance()
            return Implies(left, self.imp(cond))
        return left

    def disj(self, cond: bool) -> Formula:
        left = self.conj(cond)
        while self.tok.kind == "or":
            self.advance()
            left = Or(left, self.conj(cond))
        return left

    def conj(self, cond: bool) -> Formula:
        left = self.unary(cond)
        while self.tok.kind == "and":
            self.advance()
            left = And(left, self.unary(cond))
        return left

    def unary(self, cond: bool) -> Formula:
        if self.tok.kind == "not":
            self.advance()
            return Not(self.unary(cond))
        return self.primary(cond)

    def primary(self, cond: bool) -> Formula:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return Basic(Var(tok.text), TOP) if cond else Var(tok.text)
        if tok.kind in ("top", "bot"):
            self.advance()
            c = Const(tok.kind == "top")
            return Basic(c, TOP) if cond else c
        if tok.kind == "lpar":
            if cond:
                end = self.matching_paren(self.i)
                if self.has_top_level_bar(self.i, end):
                    return self.basic()
            self.advance()
            inner = self.formula(cond)
            if self.tok.kind == "bar" and self.inside_basic:
                self.fail("conditionals may not be nested inside a conditional")
            self.expect("rpar", "')'")
            return inner
        if tok.kind == "bar":
            if cond:
                self.fail("conditional bar outside parentheses")
            self.fail("conditionals may not be nested inside a conditional")
        if tok.kind == "nmc":
            self.fail("'|~' is only allowed in consequence queries")
        self.fail(f"unexpected {self._describe(tok)}")

    def basic(self) -> Basic:
        self.expect("lpar", "'('")
        self.inside_basic = True
        consequent = self.formula(False)
        self.expect("bar", "'|'")
        antecedent = self.formula(False)
        if self.tok.kind == "bar":
            self.fail("conditionals may not be nested inside a conditional")
        self.expect("rpar", "')'")
        self.inside_basic = False
        return Basic(consequent, antecedent)

    def done(self):
        if self.tok.kind != "eof":
            if self.tok.kind == "bar":
                self.fail("conditionals may not be nested inside a conditional")
            self.fail(f"unexpected {self._describe(self.tok)} after complete formula")


def parse_formula(text: str) -> Formula:
    """Parse a purely propositional formula."""
    p = _Parser(text)
    f = p.formula(False)
    p.done()
    return f


def parse_conditional(text: str) -> Formula:
    """Parse a (possibly compound) conditional formula without semantic checks."""
    p = _Parser(text)
    f = p.formula(True)
    p.done()
    return f


def parse_consequence(text: str) -> tuple[Formula, Formula]:
    """Parse ``phi |~ psi`` into its two propositional sides."""
    p = _Parser(text, consequence=True)
    left = p.formula(False)
    p.expect("nmc", "'|~'")
    right = p.formula(False)
    p.done()
    return left, right
