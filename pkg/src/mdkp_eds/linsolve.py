"""Linear systems over the expression field.

Used to fix the gauge freedom left by reconstructed forms: each unknown
appears linearly, and zero tests decide pivots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .symexpr import ONE, ZERO, Expr, Symbol, Verdict, ZeroTester


@dataclass
class LinearSolution:
    values: dict[Symbol, Expr]
    free: list[Symbol]
    inconsistent: list[Expr] = field(default_factory=list)
    undetermined: bool = False
    # pivot -> coefficients of the free unknowns: g = values[g] - sum c_h * h
    relations: dict[Symbol, dict[Symbol, Expr]] = field(default_factory=dict)

    def direction(self, h: Symbol) -> dict[Symbol, Expr]:
        """Change of every unknown when free ``h`` moves by one."""
        out = {h: ONE}
        for g, rel in self.relations.items():
            c = rel.get(h)
            if c is not None and c.terms:
                out[g] = -c
        return out

    @property
    def consistent(self) -> bool:
        return not self.inconsistent and not self.undetermined


def split_linear(e: Expr, unknowns: Sequence[Symbol]) -> tuple[dict[Symbol, Expr], Expr]:
    """Coefficients of ``e`` in the unknowns and its constant part."""
    present = [g for g in unknowns if g in e.free_symbols]
    coeffs = {}
    for g in present:
        c = e.derivative(g)
        if c.terms:
            coeffs[g] = c
    const = e.subs({g: ZERO for g in present}) if present else e
    return coeffs, const


def _pivot_score(c: Expr, priority: int) -> tuple:
    return (-priority, c.is_const(), len(c.terms) == 1 and c.is_laurent(), c.is_laurent(), -len(c.terms))


def solve_linear(
    equations: Iterable[Expr],
    unknowns: Sequence[Symbol],
    tester: ZeroTester | None = None,
    priorities: Sequence[int] | None = None,
) -> LinearSolution:
    """Solve ``e = 0`` for every equation, each linear in ``unknowns``.

    Unknowns without a pivot are free and set to zero in ``values``.
    Equations left over after elimination must vanish; those that do not
    are returned in ``inconsistent``.  Pivots come from the equations with
    the lowest ``priorities`` value first, so later equations can only
    constrain what earlier ones leave free.
    """
    tester = tester or ZeroTester()
    equations = list(equations)
    prio = list(priorities) if priorities is not None else [0] * len(equations)
    rows = []
    for e, pr in zip(equations, prio):
        coeffs, const = split_linear(e, unknowns)
        if coeffs or const.terms:
            rows.append((coeffs, const, pr))

    def nonzero(c: Expr) -> Verdict:
        if not c.terms:
            return Verdict.ZERO
        if c.is_laurent():
            return Verdict.NONZERO
        v = tester.is_zero(c)
        return {Verdict.ZERO: Verdict.ZERO, Verdict.NONZERO: Verdict.NONZERO}.get(v, Verdict.UNDETERMINED)

    undetermined = False
    pivots: dict[Symbol, tuple[dict, Expr]] = {}
    for g in unknowns:
        best = None
        for i, (coeffs, _, pr) in enumerate(rows):
            c = coeffs.get(g)
            if c is None:
                continue
            v = nonzero(c)
            if v is Verdict.ZERO:
                del coeffs[g]
                continue
            if v is Verdict.UNDETERMINED:
                undetermined = True
                continue
            score = _pivot_score(c, pr)
            if best is None or score > best[0]:
                best = (score, i)
        if best is None:
            continue
        coeffs, const, _ = rows.pop(best[1])
        inv = ONE / coeffs[g]
        coeffs = {h: c * inv for h, c in coeffs.items() if h is not g}
        const = const * inv
        for i, (oc, ok, pr) in enumerate(rows):
            f = oc.pop(g, None)
            if f is None:
                continue
            for h, c in coeffs.items():
                nv = oc.get(h, ZERO) - f * c
                if nv.terms:
                    oc[h] = nv
                else:
                    oc.pop(h, None)
            rows[i] = (oc, ok - f * const, pr)
        for h, (pc, pk) in list(pivots.items()):
            f = pc.pop(g, None)
            if f is None:
                continue
            for k, c in coeffs.items():
                nv = pc.get(k, ZERO) - f * c
                if nv.terms:
                    pc[k] = nv
                else:
                    pc.pop(k, None)
            pivots[h] = (pc, pk - f * const)
        pivots[g] = (coeffs, const)
    inconsistent = []
    for coeffs, const, _ in rows:
        for c in coeffs.values():
            if nonzero(c) is not Verdict.ZERO:
                raise AssertionError("unpivoted coefficient left after elimination")
        v = nonzero(const)
        if v is Verdict.NONZERO:
            inconsistent.append(const)
        elif v is Verdict.UNDETERMINED:
            undetermined = True
    free = [g for g in unknowns if g not in pivots]
    # free unknowns are set to zero
    values = {g: -k for g, (_, k) in pivots.items()}
    for g in free:
        values[g] = ZERO
    relations = {g: dict(c) for g, (c, _) in pivots.items() if c}
    return LinearSolution(values, free, inconsistent, undetermined, relations)


__all__ = ["LinearSolution", "solve_linear", "split_linear"]
