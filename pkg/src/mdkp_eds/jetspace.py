"""Jet coordinates, total derivatives and restriction to the equation manifold.

The equation is ``u_yy = RHS``.  Internal coordinates on the infinite
prolongation are the jets with at most one ``y`` in their multi-index; every
other jet up to the truncation order is eliminated through a table built by
prolonging the equation.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Mapping

from .symexpr import ONE, Expr, KAPPA, Symbol, parse, sym
from .symexpr.expr import SymExprError
from .symexpr.symbols import AXES, base, jet

DEFAULT_ORDER = 6


class TruncationError(SymExprError):
    """A total derivative would leave the truncated jet space."""


def main_rhs(kappa: Expr | None = None) -> Expr:
    """Right-hand side of the r-th mdKP equation solved for u_yy."""
    k = sym(KAPPA) if kappa is None else kappa
    ux, uy, uxx, uxy, utx = (sym(jet(i)) for i in ("x", "y", "xx", "xy", "tx"))
    half = Expr.const(1) / 2
    return utx + (half * (k + 1) * ux * ux + uy) * uxx + k * ux * uxy


def y_count(s: Symbol) -> int:
    return s.index.count("y")


def is_internal(s: Symbol) -> bool:
    return s.kind != "jet" or y_count(s) <= 1


def jet_order(e: Expr) -> int:
    return max((s.order for s in e.free_symbols if s.kind == "jet"), default=0)


def all_jets(order: int) -> list[Symbol]:
    out = []
    for n in range(order + 1):
        for idx in combinations_with_replacement(AXES, n):
            out.append(jet("".join(idx)))
    return out


def total_derivative(
    e: Expr,
    axis: str,
    order: int | None = None,
    fiber_images: Mapping[Symbol, Expr] | None = None,
) -> Expr:
    """Unrestricted total derivative ``D_axis e`` on the jet space.

    ``fiber_images`` supplies the action on fiber symbols (a covering); a
    fiber symbol without an image is an error.
    """
    images: dict = {}
    for s in e.free_symbols:
        if s.kind == "jet":
            if order is not None and s.order >= order:
                raise TruncationError(f"D_{axis} {s.name} exceeds truncation order {order}")
            images[s] = sym(jet(s.index + axis))
        elif s.kind == "base":
            if s.index == axis:
                images[s] = ONE
        elif s.kind == "fiber":
            if fiber_images is None or s not in fiber_images:
                raise SymExprError(f"no total derivative for fiber symbol {s.name}")
            images[s] = fiber_images[s]
    return e.derivation(images)


class JetContext:
    """Equation manifold of ``u_yy = rhs`` truncated at jet order ``order``."""

    def __init__(self, kappa=None, order: int = DEFAULT_ORDER, rhs: Expr | None = None):
        if order < 3:
            raise ValueError("truncation order must be at least 3")
        if kappa is None or (isinstance(kappa, str) and kappa == "symbolic"):
            self.kappa = sym(KAPPA)
        elif isinstance(kappa, Expr):
            self.kappa = kappa
        elif isinstance(kappa, str):
            self.kappa = parse(kappa)
        else:
            self.kappa = Expr.const(kappa)
        self.order = order
        self.rhs = main_rhs(self.kappa) if rhs is None else rhs
        for s in self.rhs.free_symbols:
            if s.kind == "jet" and not is_internal(s):
                raise ValueError("equation right-hand side must use internal coordinates only")
            if s.kind == "fiber":
                raise ValueError("equation right-hand side may not contain fiber symbols")
        self.uyy = jet("yy")
        self.residual = sym(self.uyy) - self.rhs
        self.table: dict[Symbol, Expr] = {}
        self._build()

    @property
    def kappa_symbolic(self) -> bool:
        return not self.kappa.is_const()

    def kappa_value(self):
        return self.kappa.const_value() if self.kappa.is_const() else None

    def _build(self) -> None:
        for n in range(2, self.order + 1):
            targets = [s for s in all_jets(n) if y_count(s) >= 2]
            targets.sort(key=lambda s: (y_count(s), s.coord_key))
            for s in targets:
                if s is self.uyy:
                    self.table[s] = self.reduce(self.rhs)
                    continue
                idx = s.index
                if "t" in idx or "x" in idx:
                    a = "t" if "t" in idx else "x"
                    parent = jet(idx.replace(a, "", 1))
                else:
                    a = "y"
                    parent = jet(idx[1:])
                self.table[s] = self.reduce(total_derivative(self.table[parent], a, self.order))

    def internal_jets(self) -> list[Symbol]:
        return [s for s in all_jets(self.order) if is_internal(s)]

    def reduce(self, e: Expr) -> Expr:
        """Restrict ``e`` to the equation manifold."""
        rules = {}
        for s in e.free_symbols:
            if s.kind == "jet" and not is_internal(s):
                v = self.table.get(s)
                if v is None:
                    raise TruncationError(f"{s.name} is beyond truncation order {self.order}")
                rules[s] = v
        return e.subs(rules) if rules else e

    def total_derivative(
        self,
        e: Expr,
        axis: str,
        on_shell: bool = True,
        fiber_images: Mapping[Symbol, Expr] | None = None,
    ) -> Expr:
        out = total_derivative(e, axis, self.order, fiber_images)
        return self.reduce(out) if on_shell else out

    def commutator(self, e: Expr, a: str, b: str, on_shell: bool = False) -> Expr:
        """``D_a D_b e - D_b D_a e``; with ``on_shell`` each step is reduced."""
        ab = self.total_derivative(self.total_derivative(e, b, on_shell), a, on_shell)
        ba = self.total_derivative(self.total_derivative(e, a, on_shell), b, on_shell)
        return ab - ba

    def table_symbols(self) -> list[Symbol]:
        return sorted(self.table, key=lambda s: s.coord_key)


def build_context(kappa=None, order: int = DEFAULT_ORDER) -> JetContext:
    return JetContext(kappa, order)


def commutator(e: Expr, a: str, b: str, ctx: JetContext) -> Expr:
    return ctx.commutator(e, a, b, on_shell=False)


def reduce(e: Expr, ctx: JetContext) -> Expr:
    return ctx.reduce(e)


__all__ = [
    "DEFAULT_ORDER",
    "JetContext",
    "TruncationError",
    "build_context",
    "commutator",
    "reduce",
    "main_rhs",
    "total_derivative",
    "is_internal",
    "jet_order",
    "all_jets",
    "base",
]
