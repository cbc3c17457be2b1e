"""The modal formula language: AST, concrete-syntax parser, printer, and the
model-checking evaluator.

Concrete grammar (whitespace-insensitive)::

    formula := iff ;            iff := imp ( "<->" imp )* ;
    imp     := or ( "->" imp )? ;                 (right-associative)
    or      := and ( "|" and )* ;   and := unary ( "&" unary )* ;
    unary   := "~" unary | "R[" name "]" unary | "S[" name "]" unary
             | "I[" name "@" formula "]" unary | "B[" name "@" formula "]" unary
             | "G[" formula "]" unary | "C" unary | atom ;
    atom    := "top" | "bot" | name | "(" formula ")" ;
    name    := [A-Za-z_][A-Za-z0-9_]* ;

``R``/``S``/``I``/``B``/``G`` act as modalities only when followed by ``[``;
``C`` acts as one when followed by anything that can start a unary formula.
Otherwise they parse as plain proposition names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .frame import Frame, FrameError
from .operators import OperatorContext


class ParseError(ValueError):
    """A syntax error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvalError(ValueError):
    """An unbound proposition or agent encountered during evaluation."""


# ---------------------------------------------------------------------------
# AST


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Reason(Formula):
    """R[i] phi: the agent has reason simpliciter to believe phi."""

    agent: str
    body: Formula


@dataclass(frozen=True)
class Indicates(Formula):
    """I[i @ phi1] phi2: phi1 indicates phi2 to the agent."""

    agent: str
    witness: Formula
    body: Formula


@dataclass(frozen=True)
class BelievesVia(Formula):
    """B[i @ phi1] phi2: the agent has phi1 as reason to believe phi2."""

    agent: str
    witness: Formula
    body: Formula


@dataclass(frozen=True)
class TrueReason(Formula):
    """S[i] phi: the agent has some true reason to believe phi."""

    agent: str
    body: Formula


@dataclass(frozen=True)
class Generates(Formula):
    """G[phi1] phi2: phi1 generates common inductive knowledge of phi2."""

    witness: Formula
    body: Formula


@dataclass(frozen=True)
class Common(Formula):
    """C phi: phi is common inductive knowledge."""

    body: Formula


TOP = Top()
BOT = Bot()


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><->|->|[~&|()\[\]@]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unknown token {stripped[0]!r}", at)
        if m.group("name"):
            out.append(_Token("name", m.group("name"), m.start("name")))
        else:
            out.append(_Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


_MODAL_BRACKET = {"R", "S", "I", "B", "G"}
_UNARY_STARTERS = {"~", "("}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def expect_name(self) -> str:
        tok = self.next()
        if tok.kind != "name":
            raise ParseError(f"expected a name, found {tok.text or 'end of input'!r}", tok.pos)
        return tok.text

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r} after formula", tok.pos)
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek().text == "<->":
            self.next()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek().text == "->":
            self.next()
            return Imp(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def _starts_unary(self, tok: _Token) -> bool:
        return tok.kind == "name" or tok.text in _UNARY_STARTERS

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.unary())
        if tok.kind == "name":
            nxt = self.tokens[self.i + 1]
            if tok.text in _MODAL_BRACKET and nxt.text == "[":
                self.next()
                self.next()
                if tok.text in ("R", "S"):
                    agent = self.expect_name()
                    self.expect("]")
                    body = self.unary()
                    return Reason(agent, body) if tok.text == "R" else TrueReason(agent, body)
                if tok.text in ("I", "B"):
                    agent = self.expect_name()
                    self.expect("@")
                    witness = self.iff()
                    self.expect("]")
                    body = self.unary()
                    cls = Indicates if tok.text == "I" else BelievesVia
                    return cls(agent, witness, body)
                witness = self.iff()
                self.expect("]")
                return Generates(witness, self.unary())
            if tok.text == "C" and self._starts_unary(nxt):
                self.next()
                return Common(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.next()
        if tok.text == "(":
            f = self.iff()
            self.expect(")")
            return f
        if tok.kind == "name":
            if tok.text == "top":
                return TOP
            if tok.text == "bot":
                return BOT
            return Prop(tok.text)
        raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}", tok.pos)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY = range(5)


def print_formula(f: Formula) -> str:
    """Render with the fewest parentheses that still round-trip."""
    return _print(f, _LEVEL_IFF)


def _print(f: Formula, level: int) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Not):
        return "~" + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, And):
        return _wrap(
            _print(f.left, _LEVEL_AND) + " & " + _print(f.right, _LEVEL_UNARY),
            level,
            _LEVEL_AND,
        )
    if isinstance(f, Or):
        return _wrap(
            _print(f.left, _LEVEL_OR) + " | " + _print(f.right, _LEVEL_AND),
            level,
            _LEVEL_OR,
        )
    if isinstance(f, Imp):
        return _wrap(
            _print(f.left, _LEVEL_OR) + " -> " + _print(f.right, _LEVEL_IMP),
            level,
            _LEVEL_IMP,
        )
    if isinstance(f, Iff):
        return _wrap(
            _print(f.left, _LEVEL_IFF) + " <-> " + _print(f.right, _LEVEL_IMP),
            level,
            _LEVEL_IFF,
        )
    if isinstance(f, Reason):
        return f"R[{f.agent}] " + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, TrueReason):
        return f"S[{f.agent}] " + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, Indicates):
        return f"I[{f.agent} @ {_print(f.witness, _LEVEL_IFF)}] " + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, BelievesVia):
        return f"B[{f.agent} @ {_print(f.witness, _LEVEL_IFF)}] " + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, Generates):
        return f"G[{_print(f.witness, _LEVEL_IFF)}] " + _print(f.body, _LEVEL_UNARY)
    if isinstance(f, Common):
        return "C " + _print(f.body, _LEVEL_UNARY)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(text: str, level: int, own: int) -> str:
    return f"({text})" if own < level else text


# ---------------------------------------------------------------------------
# models and evaluation


class Model:
    """A frame plus a valuation of proposition names.

    The operator context is built once per frame and shared by models derived
    with ``with_valuation``; valuations are never mutated in place.
    """

    def __init__(self, frame: Frame, valuation: Mapping[str, int] | None = None):
        self.frame = frame
        self.valuation: dict[str, int] = dict(valuation or {})
        for p, s in self.valuation.items():
            if s & ~frame.universe:
                raise FrameError(f"valuation of {p!r} leaves the universe")

    @cached_property
    def context(self) -> OperatorContext:
        return OperatorContext(self.frame)

    def with_valuation(self, valuation: Mapping[str, int]) -> "Model":
        out = Model(self.frame, valuation)
        out.__dict__["context"] = self.context
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "Model":
        from .frame import load_frame

        frame, valuation = load_frame(data)
        return cls(frame, valuation)

    @classmethod
    def from_file(cls, path: str) -> "Model":
        from .frame import load_frame_file

        frame, valuation = load_frame_file(path)
        return cls(frame, valuation)


def evaluate(model: Model, f: Formula) -> int:
    """The extension of a formula: the mask of worlds where it holds.

    Propositions must be bound in the valuation and agents must exist in the
    frame; anything unbound is an error rather than an implicit empty set.
    """
    ctx = model.context
    universe = model.frame.universe

    def agent_of(name: str) -> str:
        if name not in {a.name for a in model.frame.agents}:
            raise EvalError(f"unknown agent {name!r}")
        return name

    def go(f: Formula) -> int:
        if isinstance(f, Prop):
            try:
                return model.valuation[f.name]
            except KeyError:
                raise EvalError(f"unbound proposition {f.name!r}") from None
        if isinstance(f, Top):
            return universe
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Not):
            return universe & ~go(f.body)
        if isinstance(f, And):
            return go(f.left) & go(f.right)
        if isinstance(f, Or):
            return go(f.left) | go(f.right)
        if isinstance(f, Imp):
            return (universe & ~go(f.left)) | go(f.right)
        if isinstance(f, Iff):
            left, right = go(f.left), go(f.right)
            return universe & ~(left ^ right)
        if isinstance(f, Reason):
            return ctx.reason(agent_of(f.agent), go(f.body))
        if isinstance(f, Indicates):
            return ctx.indicates(agent_of(f.agent), go(f.witness), go(f.body))
        if isinstance(f, BelievesVia):
            return ctx.believes_via(agent_of(f.agent), go(f.witness), go(f.body))
        if isinstance(f, TrueReason):
            return ctx.true_reason(agent_of(f.agent), go(f.body))
        if isinstance(f, Generates):
            return ctx.generates(go(f.witness), go(f.body))
        if isinstance(f, Common):
            return ctx.common(go(f.body))
        raise TypeError(f"not a formula: {f!r}")

    return go(f)


@dataclass(frozen=True)
class CheckResult:
    valid: bool
    counterexamples: tuple[str, ...]


def check(model: Model, f: Formula) -> CheckResult:
    """Valid iff the extension is the whole universe; otherwise report the
    worlds where the formula fails."""
    ext = evaluate(model, f)
    missing = model.frame.universe & ~ext
    return CheckResult(missing == 0, model.frame.names(missing))
