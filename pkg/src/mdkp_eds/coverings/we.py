"""The form version of the covering condition.

A covering form ``omega_0 = f*(dv_0 - T_t dt - v_1 dx - T_y dy)`` is prolonged
to ``omega_j = dv_j - D~_x^j(T_t) dt - v_{j+1} dx - D~_x^j(T_y) dy``; the
condition is that ``d omega_0`` lies in the ideal of the ``omega_j`` and the
contact forms, on the equation and only there.
"""
from __future__ import annotations

from ..extforms import DiffForm, contact_form, contact_forms_upto, contact_reduce, d, ext_d, parse_form, reduce_form
from ..jetspace import JetContext, all_jets, is_internal
from ..report import FAIL, PASS, UNDETERMINED, Check, Report
from ..symexpr import KAPPA, LAMBDA, ONE, Expr, Verdict, ZeroTester, fiber, parse, render, sym
from ..symexpr.symbols import T, X, Y
from .covering import Covering, Extended, ValidityError
from .data import PREFACTOR, WE_FORMS

CONTACT_ORDER = 3


class FormShapeError(ValueError):
    """The 1-form is not of the covering shape."""


def _pins(kappa: Expr, lam: Expr | None) -> dict:
    rules = {}
    if kappa.is_const():
        rules[KAPPA] = kappa
    if lam is not None and lam.is_const():
        rules[LAMBDA] = lam
    return rules


def _lambda(spec, lam) -> Expr:
    if lam is None:
        return parse(spec.default_lambda) if spec.default_lambda else sym(LAMBDA)
    return parse(lam) if isinstance(lam, str) else lam


def we_lambda(wid: str, lam: Expr | str | None = None) -> Expr | None:
    """The lambda used by ``wid`` (None when the form has no lambda)."""
    spec = WE_FORMS[wid]
    return _lambda(spec, lam) if spec.uses_lambda else None


def we_kappa(wid: str) -> Expr:
    spec = WE_FORMS[wid]
    return sym(KAPPA) if spec.kappa is None else parse(spec.kappa)


def check_we_kappa(wid: str, kappa: Expr) -> None:
    spec = WE_FORMS[wid]
    if spec.kappa is not None:
        if not (kappa.is_const() and kappa == parse(spec.kappa)):
            raise ValidityError(f"{wid} requires kappa = {spec.kappa}")
    elif kappa.is_const() and any(kappa == parse(b) for b in spec.excluded):
        raise ValidityError(f"{wid} is undefined at kappa = {render(kappa)}")


def we_form(wid: str, kappa: Expr | str | None = None, lam: Expr | str | None = None, bracket: str | None = None) -> DiffForm:
    """The printed covering form ``wid`` (``bracket`` overrides the printed one)."""
    if wid not in WE_FORMS:
        raise ValidityError(f"unknown form {wid!r}; expected one of {sorted(WE_FORMS)}")
    spec = WE_FORMS[wid]
    k = we_kappa(wid) if kappa is None else (parse(kappa) if isinstance(kappa, str) else kappa)
    check_we_kappa(wid, k)
    lam_e = None
    if spec.uses_lambda:
        lam_e = _lambda(spec, lam)
    elif lam is not None:
        raise ValidityError(f"{wid} has no lambda parameter")
    ns = {"dv": d(fiber(0)), "dt": d(T), "dx": d(X), "dy": d(Y)}
    text = f"{PREFACTOR}*({bracket or spec.bracket})"
    f = parse_form(text, ns)
    rules = _pins(k, lam_e)
    return f.subs(rules) if rules else f


def covering_of(omega: DiffForm, kappa: Expr, tester: ZeroTester | None = None) -> Covering:
    """Read the seeds off a covering form (any nonzero multiple gives the same seeds)."""
    if omega.degree != 1:
        raise FormShapeError("covering form must have degree 1")
    v0 = fiber(0)
    allowed = {v0, T, X, Y}
    extra = omega.basis_symbols() - allowed
    if extra:
        raise FormShapeError(f"unexpected differentials: {sorted(s.name for s in extra)}")
    c = omega.coeff(v0)
    if not c.terms:
        raise FormShapeError("no dv_0 component")
    inv = ONE / c
    tx = -(omega.coeff(X) * inv)
    if tx != sym(fiber(1)) and (tester or ZeroTester()).is_zero(tx - sym(fiber(1))) is not Verdict.ZERO:
        raise FormShapeError("the dx coefficient must be -v_1 times the dv_0 coefficient")
    seeds = {"t": -(omega.coeff(T) * inv), "y": -(omega.coeff(Y) * inv)}
    return Covering("form", kappa, seeds)


def fiber_forms(cov: Covering, ctx: JetContext, depth: int, on_shell: bool = True) -> list[DiffForm]:
    ext = Extended(cov, ctx, on_shell)
    out = []
    for j in range(depth + 1):
        out.append(
            DiffForm.one_form(
                {
                    fiber(j): ONE,
                    T: -ext.image("t", j),
                    X: -sym(fiber(j + 1)),
                    Y: -ext.image("y", j),
                }
            )
        )
    return out


def _contact_off_shell(order: int) -> list[DiffForm]:
    return [contact_form(s.index) for s in all_jets(order) if is_internal(s)]


def we_check(
    omega: DiffForm,
    ctx: JetContext,
    tester: ZeroTester | None = None,
    depth: int = 2,
    name: str = "omega_0",
) -> Report:
    """Covering congruence for ``omega``: on-shell pass and off-shell obstruction."""
    tester = tester or ZeroTester()
    cov = covering_of(omega, ctx.kappa, tester)
    report = Report(
        f"we-{name}",
        {
            "form": name,
            "kappa": "symbolic" if ctx.kappa_symbolic else render(ctx.kappa),
            "order": ctx.order,
            "depth": depth,
            "contact_order": CONTACT_ORDER,
        },
    )
    ideal = fiber_forms(cov, ctx, depth, True) + contact_forms_upto(CONTACT_ORDER, ctx)
    rem = contact_reduce(ext_d(omega, ctx, on_shell=True), ideal, ctx, True, tester)
    v = rem.is_zero(tester)
    cname = "d omega_0 = 0 mod omega_j, contact forms (on-shell)"
    if v is Verdict.ZERO:
        report.add(Check(cname, PASS))
    elif v is Verdict.UNDETERMINED:
        report.add(Check(cname, UNDETERMINED, "?", "zero test undetermined"))
    else:
        report.add(Check(cname, FAIL, rem.render()))

    ideal_off = fiber_forms(cov, ctx, depth, False) + _contact_off_shell(CONTACT_ORDER)
    rem_off = contact_reduce(ext_d(omega), ideal_off, None, False, tester)
    nz = rem_off.is_zero(tester)
    back = reduce_form(rem_off, ctx).is_zero(tester)
    oname = "off-shell obstruction"
    if Verdict.UNDETERMINED in (nz, back):
        report.add(Check(oname, UNDETERMINED, "?", "zero test undetermined"))
    elif nz is Verdict.ZERO:
        report.add(Check(oname, FAIL, "0", "congruence holds off the equation"))
    elif back is not Verdict.ZERO:
        report.add(Check(oname, FAIL, reduce_form(rem_off, ctx).prune(tester).render(), "obstruction survives on the equation"))
    else:
        report.add(Check(oname, PASS, "0", "", {"obstruction_terms": len(rem_off.terms)}))
    return report


def we_check_builtin(
    wid: str,
    kappa: Expr | str | None = None,
    lam: Expr | str | None = None,
    order: int = 6,
    tester: ZeroTester | None = None,
    depth: int = 2,
) -> Report:
    omega = we_form(wid, kappa, lam)
    k = we_kappa(wid) if kappa is None else (parse(kappa) if isinstance(kappa, str) else kappa)
    report = we_check(omega, JetContext(k, order), tester, depth, wid)
    spec = WE_FORMS[wid]
    if spec.uses_lambda:
        lam_e = _lambda(spec, lam)
        report.config["lambda"] = "symbolic" if not lam_e.is_const() else render(lam_e)
    return report


def mutation_checks(
    wid: str,
    kappa: Expr | str | None = None,
    lam: Expr | str | None = None,
    order: int = 6,
    tester: ZeroTester | None = None,
) -> Report:
    """Each documented mutation of the printed form must break the congruence."""
    spec = WE_FORMS[wid]
    k = we_kappa(wid) if kappa is None else (parse(kappa) if isinstance(kappa, str) else kappa)
    ctx = JetContext(k, order)
    report = Report(f"mutations-{wid}", {"form": wid})
    for desc, old, new in spec.mutations:
        if spec.bracket.count(old) != 1:
            raise AssertionError(f"mutation {desc!r} does not match {wid} exactly once")
        omega = we_form(wid, k, lam, spec.bracket.replace(old, new))
        r = we_check(omega, ctx, tester)
        first = r.checks[0]
        if first.status == FAIL:
            report.add(Check(f"mutation: {desc}", PASS, "0", "", {"remainder": first.residual}))
        elif first.status == PASS:
            report.add(Check(f"mutation: {desc}", FAIL, "0", "mutated form still passes"))
        else:
            report.add(Check(f"mutation: {desc}", UNDETERMINED, "?", first.reason))
    return report


__all__ = [
    "FormShapeError",
    "we_form",
    "we_check",
    "we_check_builtin",
    "we_kappa",
    "we_lambda",
    "covering_of",
    "fiber_forms",
    "mutation_checks",
    "CONTACT_ORDER",
]
