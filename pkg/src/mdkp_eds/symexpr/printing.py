"""Canonical rendering.

Terms are listed by descending total degree, ties broken lexicographically on
the canonical atom keys.  The default ``dsl`` style parses back to the same
expression; ``plain`` uses subscript names such as ``u_xx`` and ``v_1``.
"""
from __future__ import annotations

from fractions import Fraction

from .symbols import LnAbs, Symbol


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _exp_key(e):
    if isinstance(e, int):
        return (0, Fraction(e))
    if hasattr(e, "terms"):
        return (1, e.sort_key())
    return (0, _frac(e))


def _degree(mono) -> Fraction:
    d = Fraction(0)
    for _, e in mono:
        if isinstance(e, int):
            d += e
        elif not hasattr(e, "terms"):
            d += _frac(e)
    return d


def display_key(atom) -> tuple:
    # parameters and invariants print ahead of coordinates
    if type(atom) is Symbol and atom.kind in ("param", "invariant"):
        return (-1,) + atom.key
    return atom.key


def term_order_key(mono: tuple) -> tuple:
    factors = tuple(sorted(((display_key(a), _exp_key(e)) for a, e in mono), key=lambda p: p[0]))
    return (-_degree(mono), factors)


def leading_monomial(e):
    return min(e.terms, key=term_order_key)


def ordered_terms(e) -> list:
    return sorted(e.terms.items(), key=lambda mc: term_order_key(mc[0]))


def symbol_name(s: Symbol, style: str = "dsl") -> str:
    if style == "plain":
        return s.name
    if s.kind == "jet":
        return "u[" + ",".join(s.index) + "]" if s.index else "u"
    if s.kind == "fiber":
        return f"v[{s.index}]"
    return s.name


def _is_negative(e) -> bool:
    if isinstance(e, int):
        return e < 0
    if hasattr(e, "terms"):
        return False
    return e < 0


def _neg_exp(e):
    return -e


def _render_exp(e, style) -> str:
    if isinstance(e, int) and e > 0:
        return str(e)
    return "(" + render(e if hasattr(e, "terms") else _const(e), style) + ")"


def _const(q):
    from .expr import Expr

    return Expr.const(q)


def _render_atom(atom, style) -> str:
    if type(atom) is Symbol:
        return symbol_name(atom, style)
    if type(atom) is LnAbs:
        return "ln(" + render(atom.arg, style) + ")"
    return "(" + render(atom.base, style) + ")"


def _factor(atom, e, style) -> str:
    base = _render_atom(atom, style)
    if isinstance(e, int) and e == 1:
        return base
    return base + "^" + _render_exp(e, style)


def _render_term(mono, c, style) -> tuple[bool, str]:
    """Return (negative, text) for one term."""
    neg = c < 0
    c = abs(c)
    num_f, den_f = [], []
    for atom, e in sorted(mono, key=lambda p: display_key(p[0])):
        if _is_negative(e):
            den_f.append(_factor(atom, _neg_exp(e), style))
        else:
            num_f.append(_factor(atom, e, style))
    q = _frac(c)
    if q.denominator != 1:
        coef = f"{q.numerator}/{q.denominator}"
    else:
        coef = str(q.numerator)
    if num_f:
        head = "*".join(num_f) if coef == "1" else coef + "*" + "*".join(num_f)
    else:
        head = coef
    if den_f:
        den = den_f[0] if len(den_f) == 1 else "(" + "*".join(den_f) + ")"
        head = head + "/" + den
    return neg, head


def render(e, style: str = "dsl") -> str:
    if not e.terms:
        return "0"
    parts = []
    for i, (m, c) in enumerate(ordered_terms(e)):
        neg, txt = _render_term(m, c, style)
        if i == 0:
            parts.append("-" + txt if neg else txt)
        else:
            parts.append((" - " if neg else " + ") + txt)
    return "".join(parts)
