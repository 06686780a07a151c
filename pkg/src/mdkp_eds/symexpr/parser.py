"""Recursive-descent parser for the expression DSL.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | "+" unary | power
    power   := primary ("^" unary)?          # right associative
    primary := INT | name | name "[" index "]" | func "(" expr ")" | "(" expr ")"

Names: ``t x y`` (base variables), ``k`` and ``lam`` (parameters), ``U V W``
(invariants), ``u`` / ``u[i1,...]`` (jets) and ``v[j]`` (fibers).
Functions: ``ln`` (read as ln|.|) and ``sqrt``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .expr import Expr, SymExprError, ln_abs, power, sqrt, sym
from .symbols import KAPPA, LAMBDA, T, X, Y, fiber, invariant, jet


class ParseError(SymExprError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col
        self.message = message


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

_NAMES = {
    "t": T,
    "x": X,
    "y": Y,
    "k": KAPPA,
    "lam": LAMBDA,
}
_INVARIANTS = ("U", "V", "W")
_FUNCS = {"ln": ln_abs, "sqrt": sqrt}


@dataclass
class _Tok:
    kind: str  # int, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()[],&":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            out.append(_Tok("op", ch, m.start(3)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, namespace: dict | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.namespace = namespace or {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok.pos)

    def expect(self, op: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            self.error(f"expected {op!r}, found {found}")
        return self.take()

    def at(self, op: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == op

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected token {self.peek().text!r}")
        return e

    def expr(self) -> Expr:
        e = self.sum_operand()
        while self.at("+") or self.at("-"):
            tok = self.take()
            rhs = self.sum_operand()
            try:
                e = e + rhs if tok.text == "+" else e - rhs
            except (TypeError, SymExprError) as err:
                self.error(f"cannot combine operands: {err}", tok)
        return e

    def sum_operand(self):
        return self.term()

    def term(self) -> Expr:
        e = self.unary()
        while self.at("*") or self.at("/"):
            tok = self.take()
            rhs = self.unary()
            try:
                if tok.text == "*":
                    e = e * rhs
                else:
                    if isinstance(rhs, Expr) and not rhs.terms:
                        self.error("division by zero", tok)
                    e = e / rhs
            except (TypeError, SymExprError) as err:
                if isinstance(err, ParseError):
                    raise
                self.error(f"cannot combine operands: {err}", tok)
        return e

    def unary(self) -> Expr:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.at("^"):
            tok = self.take()
            ex = self.unary()
            try:
                return power(base, ex)
            except (ZeroDivisionError, SymExprError, TypeError) as err:
                self.error(str(err) or "invalid power", tok)
        return base

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            return Expr.const(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            return self.name()
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected token {tok.text!r}")

    def name(self) -> Expr:
        tok = self.take()
        name = tok.text
        if name in self.namespace:
            return self.namespace[name]
        if name in _FUNCS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            try:
                return _FUNCS[name](arg)
            except SymExprError as err:
                self.error(str(err), tok)
        if name in _NAMES:
            return sym(_NAMES[name])
        if name in _INVARIANTS:
            return sym(invariant(name))
        if name == "u":
            if not self.at("["):
                return sym(jet(""))
            return sym(jet(self.jet_index()))
        if name == "v":
            self.expect("[")
            itok = self.peek()
            if itok.kind != "int":
                self.error("fiber index must be a non-negative integer")
            self.take()
            self.expect("]")
            return sym(fiber(int(itok.text)))
        self.error(f"unknown symbol {name!r}", tok)

    def jet_index(self) -> str:
        self.expect("[")
        letters = []
        while True:
            tok = self.peek()
            if tok.kind != "name" or any(ch not in "txy" for ch in tok.text):
                self.error("malformed jet index")
            self.take()
            letters.append(tok.text)
            if self.at(","):
                self.take()
                continue
            break
        self.expect("]")
        return "".join(letters)


def parse(text: str) -> Expr:
    """Parse DSL text into a canonical :class:`Expr`."""
    return _Parser(text).parse()


class FormParser(_Parser):
    """The scalar grammar plus ``&`` (wedge), binding tighter than ``+``.

    ``namespace`` maps extra names to values (forms or expressions).
    """

    def sum_operand(self):
        e = self.term()
        while self.at("&"):
            tok = self.take()
            rhs = self.term()
            try:
                e = e & rhs
            except (TypeError, SymExprError) as err:
                self.error(f"cannot wedge operands: {err}", tok)
        return e


__all__ = ["parse", "ParseError", "FormParser"]
