"""Zero testing: exact on the Laurent subring, randomized evaluation otherwise."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import gmpy2
from gmpy2 import mpq

from .expr import EvalDomainError, Expr
from .symbols import LnAbs, PowBase, Symbol

# kappa values where the equation family changes character
EXCLUDED_KAPPA = frozenset(Fraction(v) for v in ("-3", "-2", "-3/2", "-1", "0", "1"))

MAX_RETRIES = 8


class Verdict(enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ZeroTestConfig:
    points: int = 20
    precision: int = 256
    threshold_exp10: int = -40
    seed: int = 0


@dataclass
class EvalPoint:
    assignment: dict
    precision: int
    pinned: dict = field(default_factory=dict)

    def evaluate(self, e: Expr):
        with gmpy2.context(gmpy2.get_context(), precision=self.precision):
            return e.evaluate(self.assignment)


def positive_symbols(e: Expr) -> set:
    """Symbols that sit under ln or a non-integer power somewhere in ``e``."""
    out: set = set()
    seen: set = set()

    def walk(x: Expr):
        for m in x.terms:
            for atom, ex in m:
                if isinstance(ex, Expr):
                    out.update(atom.free)
                    walk(ex)
                elif not isinstance(ex, int):
                    out.update(atom.free)
                if atom in seen:
                    continue
                seen.add(atom)
                if type(atom) is LnAbs:
                    out.update(atom.free)
                    walk(atom.arg)
                elif type(atom) is PowBase:
                    walk(atom.base)

    walk(e)
    return out


def _random_real(rng: random.Random, bits: int, positive: bool):
    frac = gmpy2.mpfr(rng.getrandbits(bits)) / gmpy2.mpfr(2) ** bits
    mag = gmpy2.mpfr("0.5") + gmpy2.mpfr("1.5") * frac
    if not positive and rng.random() < 0.5:
        mag = -mag
    return mag


def random_kappa(rng: random.Random):
    while True:
        q = rng.randint(1, 7)
        p = rng.randint(-5 * q, 5 * q)
        val = Fraction(p, q)
        if val not in EXCLUDED_KAPPA:
            return mpq(val.numerator, val.denominator)


def sample_point(
    symbols: Iterable[Symbol],
    *,
    seed: int,
    index: int,
    attempt: int = 0,
    precision: int = 256,
    positive: Iterable[Symbol] = (),
    pinned: Mapping[Symbol, object] | None = None,
) -> EvalPoint:
    """Deterministic sample point; each symbol gets its own substream."""
    pos = set(positive)
    pinned = dict(pinned or {})
    values = {}
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        for s in sorted(symbols, key=lambda s: s.coord_key):
            if s in pinned:
                values[s] = gmpy2.mpfr(pinned[s])
                continue
            rng = random.Random(f"{seed}/{index}/{attempt}/{s.name}")
            if s.kind == "param" and s.name == "k":
                values[s] = gmpy2.mpfr(random_kappa(rng))
            else:
                values[s] = _random_real(rng, precision, s in pos)
    return EvalPoint(values, precision, pinned)


class ZeroTester:
    """Decides ``e == 0`` with a three-valued verdict.

    The exact path applies to Laurent polynomials; anything else is
    evaluated at ``config.points`` seeded points.  A point whose evaluation
    hits a domain error is redrawn up to ``MAX_RETRIES`` times.
    """

    def __init__(self, config: ZeroTestConfig | None = None, pinned: Mapping | None = None):
        self.config = config or ZeroTestConfig()
        self.pinned = dict(pinned or {})
        self.calls = 0
        self.probabilistic_calls = 0

    def with_pins(self, pinned: Mapping) -> "ZeroTester":
        merged = dict(self.pinned)
        merged.update(pinned)
        return ZeroTester(self.config, merged)

    def is_zero(self, e: Expr) -> Verdict:
        self.calls += 1
        if not e.terms:
            return Verdict.ZERO
        if e.is_laurent():
            return Verdict.NONZERO
        return self.probabilistic(e)

    def probabilistic(self, e: Expr) -> Verdict:
        self.probabilistic_calls += 1
        cfg = self.config
        syms = e.free_symbols
        pos = positive_symbols(e)
        with gmpy2.context(gmpy2.get_context(), precision=cfg.precision):
            thr = gmpy2.mpfr(10) ** cfg.threshold_exp10
            for i in range(cfg.points):
                for attempt in range(MAX_RETRIES):
                    pt = sample_point(
                        syms,
                        seed=cfg.seed,
                        index=i,
                        attempt=attempt,
                        precision=cfg.precision,
                        positive=pos,
                        pinned=self.pinned,
                    )
                    try:
                        val, big = e.evaluate(pt.assignment)
                    except (EvalDomainError, ZeroDivisionError):
                        continue
                    if abs(val) > thr * big:
                        return Verdict.NONZERO
                    break
                else:
                    return Verdict.UNDETERMINED
        return Verdict.ZERO

    def is_zero_all(self, exprs: Iterable[Expr]) -> Verdict:
        """Combined verdict: any nonzero wins, then any undetermined."""
        undetermined = False
        for e in exprs:
            v = self.is_zero(e)
            if v is Verdict.NONZERO:
                return v
            if v is Verdict.UNDETERMINED:
                undetermined = True
        return Verdict.UNDETERMINED if undetermined else Verdict.ZERO


_DEFAULT = ZeroTester()


def is_zero(e: Expr, tester: ZeroTester | None = None) -> Verdict:
    return (tester or _DEFAULT).is_zero(e)


def evaluate(e: Expr, point: EvalPoint):
    """Value of ``e`` at ``point``."""
    return point.evaluate(e)[0]


__all__ = [
    "Verdict",
    "ZeroTestConfig",
    "ZeroTester",
    "EvalPoint",
    "sample_point",
    "positive_symbols",
    "is_zero",
    "evaluate",
]
