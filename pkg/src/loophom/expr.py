"""Expression grammar: parsing to raw (unnormalized) elements and rendering.

Grammar (whitespace-insensitive)::

    element := term ("+" term)*
    term    := factor ("*" factor)*
    factor  := op-chain atom | atom | "(" element ")" | factor "^" UINT
    op-chain:= ("Q[" UINT ("," UINT)* "]")+
    atom    := NAME "(" args ")" | NAME | "[" pi0elt "]"
    pi0elt  := INT | NAME | INT NAME (("+"|"-") INT? NAME)*
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .core import Element, LoopHomError, Pi0Class, Pi0Spec, Symbol


class ParseError(LoopHomError, ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.column = col


class UnknownGenerator(LoopHomError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


Resolver = Callable[[str, tuple[int, ...]], "Symbol | None"]


@dataclass
class Context:
    """What names mean while parsing: declared symbols, family resolvers, pi_0."""

    p: int = 2
    pi0: Pi0Spec | None = None
    symbols: dict[str, Symbol] = field(default_factory=dict)
    families: dict[str, Resolver] = field(default_factory=dict)

    def resolve(self, family: str, args: tuple[int, ...]) -> Symbol:
        name = f"{family}({','.join(map(str, args))})" if args else family
        if name in self.symbols:
            return self.symbols[name]
        if family in self.families:
            sym = self.families[family](family, args)
            if sym is not None:
                return sym
        raise UnknownGenerator(f"unknown generator {name!r}")

    def add(self, *symbols: Symbol) -> "Context":
        for s in symbols:
            self.symbols[s.name] = s
        return self


_TOKEN = re.compile(
    r"\s*(?:(?P<Q>Q\[)|(?P<INT>\d+)|(?P<NAME>[A-Za-z_][A-Za-z_0-9]*)|(?P<SYM>[\[\]\(\),+\-*^]))"
)


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip():
                    bad = pos + (len(rest) - len(rest.lstrip()))
                    raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
                break
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    # token helpers
    def peek(self, value: str | None = None, kind: str | None = None) -> bool:
        if self.i >= len(self.toks):
            return False
        k, v, _ = self.toks[self.i]
        if kind is not None and k != kind:
            return False
        return value is None or v == value

    def take(self, value: str | None = None, kind: str | None = None) -> str:
        if not self.peek(value, kind):
            want = value or kind
            if self.i >= len(self.toks):
                raise ParseError(f"expected {want!r} but input ended", self.text, len(self.text))
            raise ParseError(f"expected {want!r}, found {self.toks[self.i][1]!r}", self.text, self.toks[self.i][2])
        v = self.toks[self.i][1]
        self.i += 1
        return v

    def here(self) -> int:
        return self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)

    # grammar
    def element(self) -> Element:
        e = self.term()
        while self.peek("+"):
            self.take("+")
            e = e + self.term()
        return e

    def term(self) -> Element:
        e = self.factor()
        while self.peek("*"):
            self.take("*")
            e = e * self.factor()
        return e

    def factor(self) -> Element:
        if self.peek("(", "SYM"):
            self.take("(")
            e = self.element()
            self.take(")")
        else:
            seq: list[int] = []
            while self.peek(kind="Q"):
                self.take(kind="Q")
                seq.append(int(self.take(kind="INT")))
                while self.peek(","):
                    self.take(",")
                    seq.append(int(self.take(kind="INT")))
                self.take("]")
            e = self.atom(tuple(seq))
        while self.peek("^"):
            self.take("^")
            e = e ** int(self.take(kind="INT"))
        return e

    def atom(self, seq: tuple[int, ...]) -> Element:
        p = self.ctx.p
        if self.peek("[", "SYM"):
            self.take("[")
            c = self.pi0elt()
            self.take("]")
            return Element.atom(seq, c, p)
        if self.peek(kind="NAME"):
            pos = self.here()
            family = self.take(kind="NAME")
            args: tuple[int, ...] = ()
            if self.peek("(", "SYM"):
                self.take("(")
                vals = [int(self.take(kind="INT"))]
                while self.peek(","):
                    self.take(",")
                    vals.append(int(self.take(kind="INT")))
                self.take(")")
                args = tuple(vals)
            try:
                sym = self.ctx.resolve(family, args)
            except UnknownGenerator as exc:
                raise ParseError(str(exc), self.text, pos) from None
            return Element.atom(seq, sym, p)
        raise ParseError("expected an atom", self.text, self.here())

    def pi0elt(self) -> Pi0Class:
        spec = self.ctx.pi0
        pos = self.here()
        if spec is None:
            raise ParseError("pi_0 class used without a pi_0 context", self.text, pos)
        vec = [0] * spec.rank
        sign = 1
        if self.peek("-"):
            self.take("-")
            sign = -1
        while True:
            coef = None
            if self.peek(kind="INT"):
                coef = int(self.take(kind="INT"))
            if self.peek(kind="NAME"):
                npos = self.here()
                name = self.take(kind="NAME")
                if name not in spec.names:
                    raise ParseError(f"unknown pi_0 generator {name!r}", self.text, npos)
                vec[spec.names.index(name)] += sign * (1 if coef is None else coef)
            elif coef is None:
                raise ParseError("expected an integer or a pi_0 generator name", self.text, self.here())
            elif spec.orders == (0,):
                vec[0] += sign * coef
            elif coef != 0:
                raise ParseError("bare integers only name classes in pi_0 = Z", self.text, pos)
            if self.peek("+"):
                self.take("+")
                sign = 1
            elif self.peek("-"):
                self.take("-")
                sign = -1
            else:
                break
        return spec.element(vec)


def parse_expression(text: str, ctx: Context | None = None) -> Element:
    """Parse ``text`` into a raw element (no Adem or inverse elimination applied).

    Inhomogeneous sums are kept; use :meth:`Element.homogeneous_parts` to split.
    """
    ctx = ctx or Context()
    parser = _Parser(text, ctx)
    if not parser.toks:
        raise ParseError("empty expression", text, 0)
    e = parser.element()
    if parser.i != len(parser.toks):
        raise ParseError(f"unexpected token {parser.toks[parser.i][1]!r}", text, parser.toks[parser.i][2])
    return e


def parse_homogeneous(text: str, ctx: Context | None = None) -> list[Element]:
    return parse_expression(text, ctx).homogeneous_parts()


def render(e: Element) -> str:
    return e.render()
