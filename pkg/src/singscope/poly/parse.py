"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (['*'] power)*      # '*' may be omitted before a variable or '('
    power   := atom ['^' integer]
    atom    := integer ['/' integer] | variable | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .lattice import DEFAULT_VARS, LatticePolynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

DEFAULT_ALIASES = {"x": "x1", "y": "x2"}


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, str, int]] = []
        data = text.encode("utf-8")
        # work on the decoded text but report byte offsets
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex) if m.lastindex else m.end()
            offset = len(text[:start].encode("utf-8"))
            if m.group(1) is not None:
                self.items.append(("num", m.group(1), offset))
            elif m.group(2) is not None:
                self.items.append(("name", m.group(2), offset))
            elif m.group(3) is not None:
                self.items.append(("op", m.group(3), offset))
            pos = m.end()
        self.items.append(("end", "", len(data)))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.items[self.i]
        self.i += 1
        return tok


class _Parser:
    def __init__(self, text: str, vars: tuple[str, str], aliases: dict[str, str]):
        self.toks = _Tokens(text)
        self.vars = vars
        self.names = {vars[0]: 0, vars[1]: 1}
        for alias, target in aliases.items():
            if target in self.names and alias not in self.names:
                self.names[alias] = self.names[target]

    def parse(self) -> LatticePolynomial:
        kind, _, off = self.toks.peek()
        if kind == "end":
            raise ParseError("empty expression", off)
        result = self.expr()
        kind, val, off = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", off)
        return result

    def expr(self) -> LatticePolynomial:
        sign = 1
        kind, val, _ = self.toks.peek()
        if kind == "op" and val in "+-":
            self.toks.next()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "+-":
                self.toks.next()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> LatticePolynomial:
        acc = self.power()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val == "*":
                self.toks.next()
                acc = acc * self.power()
            elif kind == "name" or (kind == "op" and val == "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> LatticePolynomial:
        base = self.atom()
        kind, val, off = self.toks.peek()
        if kind == "op" and val == "^":
            self.toks.next()
            kind, val, off = self.toks.next()
            if kind == "op" and val == "-":
                raise ParseError("negative exponent", off)
            if kind == "op" and val == "(":
                raise ParseError("exponent must be a non-negative integer literal", off)
            if kind != "num":
                raise ParseError("expected integer exponent", off)
            nk, nv, noff = self.toks.peek()
            if nk == "op" and nv in "/.":
                raise ParseError("fractional exponent", noff)
            return base ** int(val)
        return base

    def atom(self) -> LatticePolynomial:
        kind, val, off = self.toks.next()
        if kind == "num":
            value = Fraction(int(val))
            nk, nv, noff = self.toks.peek()
            if nk == "op" and nv == ".":
                raise ParseError("decimal literals are not supported; use a/b", noff)
            if nk == "op" and nv == "/":
                self.toks.next()
                dk, dv, doff = self.toks.next()
                if dk != "num":
                    raise ParseError("expected integer denominator", doff)
                if int(dv) == 0:
                    raise ParseError("zero denominator", doff)
                value = Fraction(int(val), int(dv))
            return LatticePolynomial.constant(value, self.vars)
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown identifier {val!r}", off)
            idx = self.names[val]
            return LatticePolynomial.monomial(1 - idx, idx, 1, self.vars)
        if kind == "op" and val == "(":
            inner = self.expr()
            ck, cv, coff = self.toks.next()
            if not (ck == "op" and cv == ")"):
                raise ParseError("expected ')'", coff)
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected {val!r}", off)


def parse_poly(
    text: str,
    vars: tuple[str, str] = DEFAULT_VARS,
    aliases: dict[str, str] | None = None,
) -> LatticePolynomial:
    """Parse an expression into an exact polynomial in the two named variables."""
    if aliases is None:
        aliases = DEFAULT_ALIASES if tuple(vars) == DEFAULT_VARS else {}
    return _Parser(text, tuple(vars), aliases).parse()
