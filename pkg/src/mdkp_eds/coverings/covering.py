"""Coverings with shift structure and their flatness checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..jetspace import DEFAULT_ORDER, JetContext, main_rhs
from ..report import FAIL, PASS, UNDETERMINED, Check, Report
from ..symexpr import KAPPA, LAMBDA, Expr, Symbol, Verdict, ZeroTester, fiber, parse, render, sym
from ..symexpr.expr import SymExprError
from .data import COVERINGS

AXES = ("t", "x", "y")
PAIRS = (("t", "x"), ("x", "y"), ("t", "y"))
DEFAULT_DEPTH = 2


class ValidityError(ValueError):
    """Parameters outside the range where a covering is defined."""


class CoveringFileError(ValueError):
    pass


def _const(text: str) -> Expr:
    return parse(text)


@dataclass
class Covering:
    """Fiber tower v_0, v_1, ... over ``u_yy = rhs``.

    ``seeds`` maps ``t`` and ``y`` to the image of v_0; D~_x v_j = v_{j+1}
    and D~_a v_j = D~_x^j(seed_a).
    """

    id: str
    kappa: Expr
    seeds: dict[str, Expr]
    lam: Expr | None = None
    rhs: Expr | None = None
    depth: int = DEFAULT_DEPTH
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for a, s in self.seeds.items():
            for f in s.free_symbols:
                if f.kind == "fiber" and f.index > 1:
                    raise ValidityError(f"seed for D~_{a} uses {f.name}; only v_0 and v_1 are allowed")

    def same_data(self, other: "Covering") -> bool:
        return (
            self.seeds == other.seeds
            and self.kappa == other.kappa
            and self.equation() == other.equation()
        )

    def equation(self) -> Expr:
        return self.rhs if self.rhs is not None else main_rhs(self.kappa)

    def context(self, order: int = DEFAULT_ORDER) -> JetContext:
        return JetContext(self.kappa, order, rhs=self.rhs)


def _check_kappa(cid: str, kappa: Expr) -> None:
    spec = COVERINGS[cid]
    if spec.kappa is not None:
        if not (kappa.is_const() and kappa == _const(spec.kappa)):
            raise ValidityError(f"{cid} requires kappa = {spec.kappa}")
        return
    if kappa.is_const():
        for bad in spec.excluded:
            if kappa == _const(bad):
                raise ValidityError(f"{cid} is undefined at kappa = {bad}")
    elif kappa.free_symbols != {KAPPA}:
        raise ValidityError("kappa must be a rational or the symbol k")


def default_kappa(cid: str) -> Expr:
    """Symbolic kappa where the covering allows it, else its pinned value."""
    spec = COVERINGS[cid]
    return sym(KAPPA) if spec.kappa is None else _const(spec.kappa)


def builtin(cid: str, kappa: Expr | str | None = None, lam: Expr | str | None = None) -> Covering:
    if cid not in COVERINGS:
        raise ValidityError(f"unknown covering {cid!r}; expected one of {sorted(COVERINGS)}")
    spec = COVERINGS[cid]
    k = default_kappa(cid) if kappa is None else (parse(kappa) if isinstance(kappa, str) else kappa)
    _check_kappa(cid, k)
    if lam is not None and not spec.uses_lambda:
        raise ValidityError(f"{cid} has no lambda parameter")
    rules: dict[Symbol, Expr] = {}
    if k.is_const():
        rules[KAPPA] = k
    lam_e = None
    if spec.uses_lambda:
        lam_e = sym(LAMBDA) if lam is None else (parse(lam) if isinstance(lam, str) else lam)
        if lam_e.free_symbols - {LAMBDA}:
            raise ValidityError("lambda must be a rational or the symbol lam")
        if lam_e.is_const():
            rules[LAMBDA] = lam_e
    seeds = {a: parse(getattr(spec, "D" + a)).subs(rules) for a in ("t", "y")}
    return Covering(cid, k, seeds, lam_e)


def user_covering(rhs: Expr | str, seeds: Mapping[str, Expr | str], kappa: Expr | str | None = None) -> Covering:
    """Covering of a user equation ``u_yy = rhs`` given by its two seeds."""
    k = sym(KAPPA) if kappa is None else (parse(kappa) if isinstance(kappa, str) else kappa)
    r = parse(rhs) if isinstance(rhs, str) else rhs
    if k.is_const():
        r = r.subs({KAPPA: k})
    out = {}
    for a in ("t", "y"):
        if a not in seeds:
            raise ValidityError(f"missing seed for D~_{a}")
        s = seeds[a]
        s = parse(s) if isinstance(s, str) else s
        out[a] = s.subs({KAPPA: k}) if k.is_const() else s
    return Covering("user", k, out, None, r)


def read_covering_file(text: str, kappa: str | None = None) -> Covering:
    """Parse ``Dt = ...``, ``Dy = ...``, ``rhs = ...`` and optional ``kappa = ...``.

    ``kappa`` is used when the file has none; a conflicting value is an error.
    """
    fields: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CoveringFileError(f"line {n}: expected 'name = expression'")
        name, value = (p.strip() for p in line.split("=", 1))
        if name not in ("Dt", "Dy", "rhs", "kappa"):
            raise CoveringFileError(f"line {n}: unknown field {name!r}")
        if name in fields:
            raise CoveringFileError(f"line {n}: {name} given twice")
        fields[name] = value
    missing = [f for f in ("Dt", "Dy", "rhs") if f not in fields]
    if missing:
        raise CoveringFileError(f"missing fields: {', '.join(missing)}")
    try:
        k = fields.get("kappa", kappa)
        if kappa is not None and "kappa" in fields and parse(kappa) != parse(fields["kappa"]):
            raise CoveringFileError(f"file sets kappa = {fields['kappa']}, command line {kappa}")
        return user_covering(fields["rhs"], {"t": fields["Dt"], "y": fields["Dy"]}, k)
    except SymExprError as exc:
        raise CoveringFileError(str(exc)) from exc


class Extended:
    """Extended total derivatives of a covering over a context."""

    def __init__(self, cov: Covering, ctx: JetContext, on_shell: bool = True):
        self.cov = cov
        self.ctx = ctx
        self.on_shell = on_shell
        self._images: dict[tuple[str, int], Expr] = {}

    def image(self, axis: str, j: int) -> Expr:
        """D~_axis v_j."""
        if axis == "x":
            return sym(fiber(j + 1))
        key = (axis, j)
        if key not in self._images:
            if j == 0:
                e = self.cov.seeds[axis]
                self._images[key] = self.ctx.reduce(e) if self.on_shell else e
            else:
                self._images[key] = self.D(self.image(axis, j - 1), "x")
        return self._images[key]

    def D(self, e: Expr, axis: str) -> Expr:
        images = {s: self.image(axis, s.index) for s in e.free_symbols if s.kind == "fiber"}
        return self.ctx.total_derivative(e, axis, self.on_shell, images)

    def commutator(self, e: Expr, a: str, b: str) -> Expr:
        return self.D(self.D(e, b), a) - self.D(self.D(e, a), b)


def _verdict_check(name: str, e: Expr, tester: ZeroTester, want_zero: bool = True, details=None) -> Check:
    v = tester.is_zero(e)
    details = dict(details or {})
    if v is Verdict.UNDETERMINED:
        return Check(name, UNDETERMINED, "?", "zero test undetermined", details)
    ok = (v is Verdict.ZERO) == want_zero
    residual = "0" if v is Verdict.ZERO else render(e)
    return Check(name, PASS if ok else FAIL, residual if not ok or not want_zero else "0", "", details)


def flatness(
    cov: Covering,
    ctx: JetContext | None = None,
    J: int | None = None,
    tester: ZeroTester | None = None,
) -> Report:
    """On-shell commutators of the extended total derivatives on v_0..v_J.

    Also checks that the off-shell (t,y) commutator on v_0 is nonzero and
    vanishes once the equation is imposed, i.e. the covering detects it.
    """
    tester = tester or ZeroTester()
    J = cov.depth if J is None else J
    if J < 1:
        raise ValueError("fiber depth must be at least 1")
    ctx = ctx or cov.context()
    if ctx.kappa != cov.kappa:
        raise ValidityError("context kappa does not match the covering")
    report = Report(
        f"flatness-{cov.id}",
        {
            "covering": cov.id,
            "kappa": "symbolic" if not cov.kappa.is_const() else render(cov.kappa),
            "lambda": None if cov.lam is None else ("symbolic" if not cov.lam.is_const() else render(cov.lam)),
            "depth": J,
            "order": ctx.order,
        },
    )
    on = Extended(cov, ctx, on_shell=True)
    for a, b in PAIRS:
        for j in range(J + 1):
            c = on.commutator(sym(fiber(j)), a, b)
            report.add(_verdict_check(f"[D_{a},D_{b}] v_{j}", c, tester))
    off = Extended(cov, ctx, on_shell=False)
    c_off = off.commutator(sym(fiber(0)), "t", "y")
    nonzero = tester.is_zero(c_off)
    vanishes = tester.is_zero(ctx.reduce(c_off))
    name = "equation-detection [D_t,D_y] v_0"
    if Verdict.UNDETERMINED in (nonzero, vanishes):
        report.add(Check(name, UNDETERMINED, "?", "zero test undetermined"))
    elif nonzero is Verdict.ZERO:
        report.add(Check(name, FAIL, "0", "off-shell commutator vanishes identically"))
    elif vanishes is not Verdict.ZERO:
        report.add(Check(name, FAIL, render(ctx.reduce(c_off)), "off-shell commutator does not vanish on the equation"))
    else:
        report.add(Check(name, PASS, "0", "", {"off_shell_terms": len(c_off.terms)}))
    return report


__all__ = [
    "Covering",
    "Extended",
    "ValidityError",
    "CoveringFileError",
    "builtin",
    "default_kappa",
    "user_covering",
    "read_covering_file",
    "flatness",
    "PAIRS",
]
