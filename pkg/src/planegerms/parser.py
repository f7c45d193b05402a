"""Reading and printing bivariate polynomials.

Grammar (``^`` binds tightest, exponents are non-negative integer literals)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | "x" | "y" | "i" | "(" expr ")"

Division is only allowed by a nonzero constant.  Juxtaposition such as
``2x`` is rejected rather than read as a product.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import GaussianRational, format_scalar
from .bivariate import BivarPoly


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


@dataclass
class Token:
    kind: str
    value: str
    pos: int


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^()]))")
_ALIASES = {"−": "-", "·": "*"}


def tokenize(text: str) -> list[Token]:
    src = "".join(_ALIASES.get(ch, ch) for ch in text)
    out, pos = [], 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        kind, val = m.lastgroup, m.group(m.lastgroup)
        if kind == "name" and val not in ("x", "y", "i"):
            raise ParseError(f"unknown symbol {val!r}", text, start)
        if val == "**":
            val = "^"
        out.append(Token(kind, val, start))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def fail(self, msg: str, tok: Token | None = None):
        raise ParseError(msg, self.text, (tok or self.tok).pos)

    def take(self, value: str | None = None) -> Token:
        t = self.tok
        if value is not None and t.value != value:
            self.fail(f"expected {value!r}")
        self.k += 1
        return t

    def parse(self) -> BivarPoly:
        if self.tok.kind == "end":
            self.fail("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            if self._starts_atom(self.tok):
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected {self.tok.value!r}")
        return e

    def expr(self) -> BivarPoly:
        acc = self.term()
        while self.tok.value in ("+", "-"):
            op = self.take().value
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> BivarPoly:
        acc = self.unary()
        while self.tok.value in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op.value == "*":
                acc = acc * rhs
            else:
                c = _constant(rhs)
                if c is None:
                    self.fail("division by a non-constant expression", op)
                if c.is_zero():
                    self.fail("division by zero", op)
                acc = acc * BivarPoly.const(c.inverse())
        return acc

    def unary(self) -> BivarPoly:
        if self.tok.value == "-":
            self.take()
            return -self.unary()
        if self.tok.value == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> BivarPoly:
        base = self.atom()
        if self.tok.value == "^":
            self.take()
            t = self.tok
            if t.kind != "num":
                self.fail("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(t.value)
            if self.tok.value == "^":
                self.fail("chained exponents are ambiguous; use parentheses")
        if self._starts_atom(self.tok):
            self.fail("implicit multiplication is not allowed; use '*'")
        return base

    @staticmethod
    def _starts_atom(t: Token) -> bool:
        return t.kind in ("num", "name") or t.value == "("

    def atom(self) -> BivarPoly:
        t = self.tok
        if t.kind == "num":
            self.take()
            return BivarPoly.const(int(t.value))
        if t.kind == "name":
            self.take()
            if t.value == "x":
                return BivarPoly.x()
            if t.value == "y":
                return BivarPoly.y()
            return BivarPoly.const(GaussianRational(0, 1))
        if t.value == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {t.value!r}")


def _constant(p: BivarPoly):
    if not p.terms:
        return GaussianRational(0)
    if set(p.terms) == {(0, 0)}:
        return p.terms[(0, 0)]
    return None


def parse_poly(text: str) -> BivarPoly:
    """Parse ``text`` into a :class:`BivarPoly`; raises :class:`ParseError` with a position."""
    return _Parser(text).parse()


def _monomial(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def format_poly(f: BivarPoly) -> str:
    """Readable form that :func:`parse_poly` reads back to the same polynomial."""
    out = []
    for (i, j), c in sorted(f.terms.items(), key=lambda kv: (sum(kv[0]), -kv[0][0])):
        mono = _monomial(i, j)
        neg = c.level == 0 and ((not c.im and c.re < 0) or (not c.re and c.im < 0))
        mag = -c if neg else c
        cs = format_scalar(mag)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"
