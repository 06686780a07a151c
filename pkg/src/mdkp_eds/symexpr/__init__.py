"""Exact symbolic expressions over jet, fiber and parameter symbols."""
from .expr import (
    ONE,
    ZERO,
    CyclicRuleError,
    EvalDomainError,
    Expr,
    MissingAssignmentError,
    SymExprError,
    ln_abs,
    power,
    sqrt,
    sym,
    sympify,
)
from .parser import ParseError, parse
from .printing import render
from .symbols import KAPPA, LAMBDA, T, X, Y, LnAbs, PowBase, Symbol, base, fiber, gen, invariant, jet, param
from .zerotest import EvalPoint, Verdict, ZeroTestConfig, ZeroTester, evaluate, is_zero, sample_point


def derivative(e: Expr, s: Symbol) -> Expr:
    return e.derivative(s)


def substitute(e: Expr, rules) -> Expr:
    return e.subs(rules)


__all__ = [
    "ONE", "ZERO", "Expr", "Symbol", "LnAbs", "PowBase",
    "SymExprError", "CyclicRuleError", "EvalDomainError", "MissingAssignmentError", "ParseError",
    "T", "X", "Y", "KAPPA", "LAMBDA",
    "base", "jet", "fiber", "param", "invariant", "gen", "sym", "sympify",
    "ln_abs", "power", "sqrt", "parse", "render", "derivative", "substitute",
    "EvalPoint", "Verdict", "ZeroTestConfig", "ZeroTester", "evaluate", "is_zero", "sample_point",
]
