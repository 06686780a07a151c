"""Maurer-Cartan coframes and invariants of the two kappa branches."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..extforms import Coframe, DiffForm, contact_form, d, label, parse_form, register_labels, reduce_form
from ..jetspace import JetContext
from ..symexpr import KAPPA, Expr, Symbol, parse, sym
from ..symexpr.symbols import T, X, Y, invariant, jet
from . import data
from .data import ERRATA, EXCEPTIONAL, GENERIC, READINGS

# fixed positions keep label order independent of construction order
LABEL_NAMES = (
    "theta_0", "theta_1", "theta_2", "theta_3", "theta_22",
    "xi_1", "xi_2", "xi_3",
    "eta_1", "eta_2", "eta_3", "eta_4",
    "theta_11", "theta_12", "theta_13", "theta_23",
    "omega_0", "omega_1", "omega_2",
)
register_labels(LABEL_NAMES)

CONTACT_INDICES = {"vth_0": "", "vth_1": "t", "vth_2": "x", "vth_3": "y", "vth_22": "xx"}

U_SYM = invariant("U")
V_SYM = invariant("V")
W_SYM = invariant("W")


class BranchError(ValueError):
    pass


def branch_of(ctx: JetContext) -> str:
    k = ctx.kappa_value()
    return EXCEPTIONAL if k is not None and k == -1 else GENERIC


def check_branch(ctx: JetContext, branch: str) -> None:
    actual = branch_of(ctx)
    if branch != actual:
        raise BranchError(f"the {branch} branch needs kappa {'= -1' if branch == EXCEPTIONAL else '!= -1'}")


def apply_errata(text: str, branch: str, kind: str, key: str, enabled: Iterable[str] | None) -> str:
    for e in ERRATA:
        if e.branch != branch or e.kind != kind or e.key != key:
            continue
        if enabled is not None and e.id not in enabled:
            continue
        if text.count(e.printed) != 1:
            raise AssertionError(f"erratum {e.id} does not match its target exactly once")
        text = text.replace(e.printed, e.corrected)
    return text


def apply_readings(text: str, branch: str, key: str, overrides: dict | None = None) -> str:
    for r in READINGS:
        if r.branch != branch or r.key != key:
            continue
        choice = (overrides or {}).get(r.id, r.chosen)
        text = text.replace(r.placeholder, choice)
    return text


def pin_kappa(e: Expr, ctx: JetContext) -> Expr:
    return e if ctx.kappa_symbolic else e.subs({KAPPA: ctx.kappa})


@dataclass
class Invariants:
    U: Expr
    V: Expr | None = None

    def rules(self) -> dict[Symbol, Expr]:
        out = {U_SYM: self.U}
        if self.V is not None:
            out[V_SYM] = self.V
        return out


def invariants(ctx: JetContext) -> Invariants:
    branch = branch_of(ctx)
    src = data.INVARIANTS[branch]
    U = ctx.reduce(pin_kappa(parse(src["U"]), ctx))
    V = ctx.reduce(pin_kappa(parse(src["V"]), ctx)) if "V" in src else None
    return Invariants(U, V)


@dataclass
class McCoframe:
    branch: str
    ctx: JetContext
    forms: dict[str, DiffForm]
    contact: dict[str, DiffForm]
    invariants: Invariants
    errata: tuple[str, ...] = field(default_factory=tuple)

    def coframe(self, extra: dict[str, DiffForm] | None = None) -> Coframe:
        names = list(data.COFRAME_ORDER)
        forms = [self.forms[n] for n in names]
        for n, f in (extra or {}).items():
            names.append(n)
            forms.append(f)
        return Coframe(names, forms)

    def __getitem__(self, name: str) -> DiffForm:
        return self.forms[name]


def coordinate_namespace(ctx: JetContext) -> dict:
    ns = {name: contact_form(idx, ctx) for name, idx in CONTACT_INDICES.items()}
    ns.update({"dt": d(T), "dx": d(X), "dy": d(Y), "du_xxx": d(jet("xxx"))})
    return ns


def mc_coframe(ctx: JetContext, branch: str | None = None, errata: Iterable[str] | None = None) -> McCoframe:
    """The printed coframe on the branch of ``ctx``.

    ``errata`` selects which corrections are applied (all by default; pass
    an empty list to build the forms exactly as printed).
    """
    actual = branch_of(ctx)
    if branch is not None:
        check_branch(ctx, branch)
    branch = actual
    enabled = None if errata is None else set(errata)
    inv = invariants(ctx)
    ns = coordinate_namespace(ctx)
    ns["U"] = inv.U
    if inv.V is not None:
        ns["V"] = inv.V
    forms: dict[str, DiffForm] = {}
    for name in data.COFRAME_ORDER:
        text = apply_errata(data.COFRAMES[branch][name], branch, "coframe", name, enabled)
        f = parse_form(text, ns)
        f = reduce_form(f.map_coeffs(lambda c: pin_kappa(c, ctx)), ctx)
        forms[name] = f
        ns[name] = f
    contact = {name: ns[name] for name in CONTACT_INDICES}
    used = tuple(e.id for e in ERRATA if e.branch == branch and e.kind == "coframe" and (enabled is None or e.id in enabled))
    return McCoframe(branch, ctx, forms, contact, inv, used)


def abstract_namespace(extra: Iterable[str] = ()) -> dict:
    ns: dict = {n: DiffForm.basis(label(n)) for n in LABEL_NAMES}
    for n in extra:
        ns[n] = DiffForm.basis(label(n))
    ns["U"] = sym(U_SYM)
    ns["V"] = sym(V_SYM)
    ns["W"] = sym(W_SYM)
    return ns


def structure_rhs(
    branch: str,
    key: str,
    kappa: Expr | None = None,
    errata: Iterable[str] | None = None,
    readings: dict | None = None,
) -> DiffForm:
    """Right-hand side of a structure equation as an abstract form."""
    enabled = None if errata is None else set(errata)
    text = data.STRUCTURE[branch][key]
    text = apply_errata(text, branch, "structure", key, enabled)
    text = apply_readings(text, branch, key, readings)
    f = parse_form(text, abstract_namespace())
    if kappa is not None and kappa.is_const():
        f = f.subs({KAPPA: kappa})
    elif branch == EXCEPTIONAL:
        f = f.subs({KAPPA: Expr.const(-1)})
    return f


__all__ = [
    "McCoframe",
    "Invariants",
    "BranchError",
    "mc_coframe",
    "invariants",
    "structure_rhs",
    "branch_of",
    "abstract_namespace",
    "LABEL_NAMES",
    "U_SYM",
    "V_SYM",
    "W_SYM",
    "GENERIC",
    "EXCEPTIONAL",
]
