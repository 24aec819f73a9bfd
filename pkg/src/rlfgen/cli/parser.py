"""Recursive-descent parser for polynomial expressions with exact rationals.

Grammar (no implicit multiplication)::

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" posint)?
    base     := ident | rational | "(" expr ")" | "-" factor
    rational := int ("/" posint)?
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..polyring import Polynomial

MAX_DEGREE = 64

_TOKEN = re.compile(r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>[-+*^/()])")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "op" | "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, col))
        for ch in m.group():
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("end", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str, ring: tuple):
        self.toks = tokenize(text)
        self.k = 0
        self.ring = ring

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.k += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.error(f"expected {op!r}, found {self.tok.text or 'end of input'!r}")

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.accept("*"):
            q = self.factor()
            if p.total_degree() + q.total_degree() > MAX_DEGREE:
                self.error(f"degree exceeds {MAX_DEGREE}")
            p = p * q
        return p

    def factor(self) -> Polynomial:
        b = self.base()
        if self.accept("^"):
            tok = self.tok
            e = self.posint("exponent")
            if b.total_degree() * e > MAX_DEGREE:
                self.error(f"degree exceeds {MAX_DEGREE}", tok)
            b = b ** e
        return b

    def posint(self, what: str) -> int:
        tok = self.tok
        if tok.kind == "op" and tok.text == "-":
            self.error(f"{what} must be a positive integer")
        if tok.kind != "int":
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.k += 1
        v = int(tok.text)
        if v <= 0:
            self.error(f"{what} must be a positive integer", tok)
        return v

    def base(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "ident":
            if tok.text not in self.ring:
                self.error(f"undeclared identifier {tok.text!r}")
            self.k += 1
            return Polynomial.variable(self.ring, tok.text)
        if tok.kind == "int":
            self.k += 1
            num = int(tok.text)
            if self.accept("/"):
                return Polynomial.constant(self.ring, Fraction(num, self.posint("denominator")))
            return Polynomial.constant(self.ring, num)
        if self.accept("("):
            p = self.expr()
            self.expect(")")
            return p
        if self.accept("-"):
            return -self.factor()
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_poly(text: str | bytes, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a polynomial over ``variables``."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("input is not valid UTF-8", 1, e.start + 1) from None
    try:
        return _Parser(text, tuple(variables)).parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", 1, 1) from None


def parse_rational(text: str) -> Fraction:
    """A rational literal, optionally signed: ``-3/4``, ``2``."""
    s = text.strip()
    m = re.fullmatch(r"([+-]?)(\d+)(?:/(\d+))?", s)
    if not m or (m.group(3) is not None and int(m.group(3)) == 0):
        raise ParseError(f"not a rational literal: {text!r}", 1, 1)
    v = Fraction(int(m.group(2)), int(m.group(3) or 1))
    return -v if m.group(1) == "-" else v


def parse_point(text: str) -> tuple:
    """Comma-separated rationals, e.g. ``"2,1"``."""
    parts = text.split(",")
    if not text.strip():
        raise ParseError("empty point", 1, 1)
    return tuple(parse_rational(p) for p in parts)


def parse_grid(spec: str) -> tuple:
    """``"a:-2..2:1/2"`` to ``("a", (-2, -3/2, ..., 2))``; the step defaults to 1."""
    parts = spec.split(":")
    if len(parts) not in (2, 3) or ".." not in parts[1]:
        raise ParseError(f"grid spec must look like name:lo..hi[:step], got {spec!r}", 1, 1)
    name = parts[0].strip()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise ParseError(f"bad parameter name {name!r}", 1, 1)
    lo_s, hi_s = parts[1].split("..", 1)
    lo, hi = parse_rational(lo_s), parse_rational(hi_s)
    step = parse_rational(parts[2]) if len(parts) == 3 else Fraction(1)
    if step <= 0 or hi < lo:
        raise ParseError("grid needs lo <= hi and a positive step", 1, 1)
    n = int((hi - lo) / step)
    return name, tuple(lo + k * step for k in range(n + 1))
