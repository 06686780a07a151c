"""Machine checks of the structure equations.

Every identity ``d(lhs) = rhs`` is compared in the frame of the coframe.
Forms that are never given explicitly (``eta_2``, ``theta_12`` ...) are
reconstructed from the identities where they occur linearly; each
representative carries one gauge parameter per partner direction, and all
gauge parameters are then fixed by a single linear solve over every checked
identity.  An identity passes when its residual vanishes for that gauge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..extforms import DiffForm, Frame, ext_d, label, scalar, solve_factors, structure_d
from ..jetspace import JetContext
from ..linsolve import solve_linear
from ..report import FAIL, PASS, SKIPPED, UNDETERMINED, Check, Report
from ..symexpr import Expr, Symbol, Verdict, ZeroTester, param, render
from . import data
from .coframes import (
    EXCEPTIONAL,
    GENERIC,
    U_SYM,
    V_SYM,
    McCoframe,
    mc_coframe,
    structure_rhs,
)

STAGE_A = "A"
STAGE_B = "B"
STAGE_C = "C"
STAGE_D = "D"


@dataclass(frozen=True)
class Step:
    key: str
    stage: str
    defines: tuple[str, ...] = ()
    skip: str = ""

    @property
    def name(self) -> str:
        return "d" + self.key


GENERIC_PLAN = (
    Step("theta_0", STAGE_A),
    Step("xi_1", STAGE_A),
    Step("xi_2", STAGE_A),
    Step("xi_3", STAGE_A),
    Step("theta_22", STAGE_B, ("eta_3", "eta_2")),
    Step("theta_2", STAGE_B, ("theta_12", "theta_23")),
    Step("theta_3", STAGE_B, ("theta_13",)),
    Step("U", STAGE_C),
    Step("V", STAGE_C),
    Step("eta_1", STAGE_C),
    Step("eta_2", STAGE_D),
    Step("theta_1", STAGE_D, skip="theta_11 occurs only here, so the xi^1 slot carries no information"),
)

EXCEPTIONAL_PLAN = (
    Step("theta_0", STAGE_A),
    Step("xi_1", STAGE_A),
    Step("xi_3", STAGE_A, ("eta_2",)),
    Step("xi_2", STAGE_A),
    Step("eta_1", STAGE_B, ("eta_3",)),
    Step("theta_2", STAGE_B, ("theta_12", "theta_23")),
    Step("theta_3", STAGE_B, ("theta_13",)),
    Step("theta_22", STAGE_C),
    Step("U", STAGE_C),
    Step("eta_2", STAGE_D),
    Step("theta_23", STAGE_D, ("eta_4",)),
    Step("eta_3", STAGE_D),
    Step("theta_1", STAGE_D, skip="theta_11 occurs only here, so the xi^1 slot carries no information"),
)

PLANS = {GENERIC: GENERIC_PLAN, EXCEPTIONAL: EXCEPTIONAL_PLAN}
STAGE_A_KEYS = ("theta_0", "xi_1", "xi_2", "xi_3")


def gauge_param(unknown: str, partner: str) -> Symbol:
    return param(f"g_{unknown}__{partner}")


@dataclass
class _Entry:
    step: Step
    residual: DiffForm | None = None
    reason: str = ""
    uses: tuple[str, ...] = ()


@dataclass
class StructureReport(Report):
    reconstructed: dict[str, DiffForm] = field(default_factory=dict)
    ambiguity: dict[str, list[str]] = field(default_factory=dict)


class _Verifier:
    def __init__(self, ctx, mc: McCoframe, tester, readings, errata, plan):
        self.ctx = ctx
        self.mc = mc
        self.branch = mc.branch
        self.tester = tester
        self.readings = readings
        self.errata = errata
        self.plan = plan
        self.frame = Frame(mc.coframe(), tester)
        self.known = set(data.COFRAME_ORDER)
        self.reps: dict[str, DiffForm] = {}
        self.params: list[Symbol] = []
        self.param_owner: dict[Symbol, tuple[str, str]] = {}
        self.entries: list[_Entry] = []
        self.solution = None

    # -- pieces -------------------------------------------------------------
    def rhs(self, key: str) -> DiffForm:
        kappa = None if self.ctx.kappa_symbolic else self.ctx.kappa
        f = structure_rhs(self.branch, key, kappa, self.errata, self.readings)
        return f.subs(self.mc.invariants.rules())

    def lhs(self, key: str) -> DiffForm | None:
        if key in self.mc.forms:
            return self.frame.to_frame(ext_d(self.mc[key], self.ctx, on_shell=True))
        if key == "U":
            return self.frame.to_frame(ext_d(scalar(self.mc.invariants.U), self.ctx, on_shell=True))
        if key == "V":
            return self.frame.to_frame(ext_d(scalar(self.mc.invariants.V), self.ctx, on_shell=True))
        rep = self.current(key)
        if rep is None:
            return None
        return self.frame.to_frame(ext_d(self.frame.from_frame(rep), self.ctx, on_shell=True))

    def current(self, name: str) -> DiffForm | None:
        """The representative of ``name`` with solved gauge, or None if not unique."""
        rep = self.reps[name]
        sol = self.solve()
        rep = rep.subs(sol.values) if sol.values else rep
        if any(g in rep.free_symbols for g in sol.free):
            return None
        return rep

    def solve(self):
        if self.solution is None:
            eqs, prio = [], []
            for i, e in enumerate(self.entries):
                if e.residual is not None:
                    eqs.extend(e.residual.terms.values())
                    prio.extend([i] * len(e.residual.terms))
            self.solution = solve_linear(eqs, self.params, self.tester, prio)
        return self.solution

    @staticmethod
    def partner(rhs: DiffForm, name: str) -> tuple[str, Expr]:
        lab = label(name)
        found = []
        for (a, b), c in rhs.terms.items():
            if a is lab:
                found.append((b, -c))
            elif b is lab:
                found.append((a, c))
        if len(found) != 1 or found[0][0].kind != "gen" or not found[0][1].is_const():
            raise ValueError(f"{name} does not occur with a single constant partner")
        return found[0][0].name, found[0][1]

    # -- driver -------------------------------------------------------------
    def run_step(self, step: Step) -> _Entry:
        entry = _Entry(step)
        self.entries.append(entry)
        if step.skip:
            entry.reason = step.skip
            return entry
        rhs = self.rhs(step.key)
        needed = sorted(
            {s.name for k in rhs.terms for s in k} - self.known - set(step.defines),
            key=lambda n: label(n).coord_key,
        )
        missing = [n for n in needed if n not in self.reps]
        if missing:
            entry.reason = "needs " + ", ".join(missing)
            return entry
        if step.key not in self.known and step.key not in ("U", "V"):
            if step.key not in self.reps:
                entry.reason = f"{step.key} is not reconstructed"
                return entry
        lhs = self.lhs(step.key)
        if lhs is None:
            entry.reason = f"{step.key} is only known up to gauge"
            return entry
        if step.defines:
            defined = [label(n) for n in step.defines]
            known_part = rhs.restrict(lambda k: not any(s in defined for s in k))
            known_part = known_part.replace_basis({label(n): self.reps[n] for n in needed})
            pattern, scale = [], {}
            for n in step.defines:
                p, c = self.partner(rhs, n)
                pattern.append((p, n))
                scale[n] = c
            sol = solve_factors(lhs - known_part, pattern)
            for p, n in pattern:
                rep = sol.solved[n] / scale[n]
                for q, _ in pattern:
                    g = gauge_param(n, q)
                    self.params.append(g)
                    self.param_owner[g] = (n, q)
                    rep = rep + DiffForm.basis(label(q)) * g
                self.reps[n] = rep
        images = {label(n): self.reps[n] for n in list(needed) + list(step.defines)}
        full = rhs.replace_basis(images)
        entry.residual = lhs - full
        entry.uses = tuple(needed) + tuple(step.defines)
        self.solution = None
        return entry

    def run(self, only: Iterable[str] | None = None) -> StructureReport:
        keys = None if only is None else set(only)
        for step in self.plan:
            if keys is not None and step.key not in keys:
                continue
            self.run_step(step)
        sol = self.solve()
        report = StructureReport(f"structure-{self.branch}")
        for e in self.entries:
            report.add(self.to_check(e, sol))
        for name in sorted(self.reps, key=lambda n: label(n).coord_key):
            rep = self.reps[name].subs(sol.values) if sol.values else self.reps[name]
            report.reconstructed[name] = rep
            report.ambiguity[name] = [self.param_owner[g][1] for g in sol.free if self.param_owner[g][0] == name]
        return report

    def to_check(self, e: _Entry, sol) -> Check:
        name = e.step.name
        details = {"stage": e.step.stage}
        if e.residual is None:
            return Check(name, SKIPPED, "", e.reason, details)
        res = e.residual.subs(sol.values) if sol.values else e.residual
        verdict = res.is_zero(self.tester)
        if e.uses:
            details["uses"] = list(e.uses)
        if verdict is Verdict.ZERO:
            if sol.undetermined:
                return Check(name, UNDETERMINED, "?", "gauge solve hit an undetermined pivot", details)
            return Check(name, PASS, "0", "", details)
        if verdict is Verdict.UNDETERMINED:
            return Check(name, UNDETERMINED, "?", "zero test undetermined", details)
        pruned = res.prune(self.tester)
        return Check(name, FAIL, pruned.render(), "", details)


def verify_structure(
    ctx: JetContext,
    tester: ZeroTester | None = None,
    readings: dict | None = None,
    errata: Iterable[str] | None = None,
    only: Iterable[str] | None = None,
) -> StructureReport:
    """Run the check plan of the branch selected by ``ctx``.

    ``errata`` restricts which corrections are applied (default: all);
    ``only`` limits the plan to the given keys, keeping plan order.
    """
    tester = tester or ZeroTester()
    mc = mc_coframe(ctx, errata=errata)
    v = _Verifier(ctx, mc, tester, readings, errata, PLANS[mc.branch])
    report = v.run(only)
    report.config = {
        "branch": mc.branch,
        "kappa": "symbolic" if ctx.kappa_symbolic else str(ctx.kappa),
        "order": ctx.order,
        "errata": list(mc.errata) + [e for e in _structure_errata(mc.branch, errata)],
    }
    return report


def _structure_errata(branch: str, enabled) -> list[str]:
    return [
        e.id
        for e in data.ERRATA
        if e.branch == branch and e.kind == "structure" and (enabled is None or e.id in set(enabled))
    ]


# -- abstract closure -------------------------------------------------------

def abstract_system(branch: str, readings: dict | None = None, errata: Iterable[str] | None = None):
    """All printed structure equations as generator and invariant differentials."""
    dgen, dfun = {}, {}
    for key in data.STRUCTURE[branch]:
        rhs = structure_rhs(branch, key, None, errata, readings)
        if key == "U":
            dfun[U_SYM] = rhs
        elif key == "V":
            dfun[V_SYM] = rhs
        else:
            dgen[label(key)] = rhs
    return dgen, dfun


CLOSURE_KEYS = {b: tuple(data.STRUCTURE[b]) for b in (GENERIC, EXCEPTIONAL)}


def closure_check(
    ctx: JetContext,
    tester: ZeroTester | None = None,
    readings: dict | None = None,
    errata: Iterable[str] | None = None,
) -> Report:
    """``d(rhs) = 0`` for every transcribed structure equation.

    Equations whose right-hand side involves a form without a transcribed
    differential (``theta_11``, ``eta_3`` on the generic branch ...) are
    skipped.  The exterior derivative acts on the printed right-hand side through the
    printed structure equations themselves, so the 3-form must vanish
    identically in the generators.
    """
    from .coframes import branch_of

    tester = tester or ZeroTester()
    branch = branch_of(ctx)
    kappa = None if ctx.kappa_symbolic else ctx.kappa
    dgen, dfun = abstract_system(branch, readings, errata)
    if kappa is not None:
        from ..symexpr import KAPPA

        dgen = {k: v.subs({KAPPA: kappa}) for k, v in dgen.items()}
        dfun = {k: v.subs({KAPPA: kappa}) for k, v in dfun.items()}
    report = Report(f"closure-{branch}", {"branch": branch, "kappa": "symbolic" if kappa is None else str(kappa)})
    for key in CLOSURE_KEYS[branch]:
        rhs = {"U": dfun.get(U_SYM), "V": dfun.get(V_SYM)}.get(key) or dgen[label(key)]
        name = f"d(d{key})"
        try:
            dd = structure_d(rhs, dgen, dfun)
        except Exception as exc:  # missing structure equation
            report.add(Check(name, SKIPPED, "", str(exc)))
            continue
        v = dd.is_zero(tester)
        if v is Verdict.ZERO:
            report.add(Check(name, PASS))
        elif v is Verdict.UNDETERMINED:
            report.add(Check(name, UNDETERMINED, "?"))
        else:
            report.add(Check(name, FAIL, dd.prune(tester).render()))
    return report


# -- reconstruction routes ---------------------------------------------------

# (identities, unknown forms) per route; the compared forms are eta_2, eta_3
ROUTES = {
    GENERIC: {
        "d theta_22": (("theta_22",), ("eta_2", "eta_3")),
        "dU, dV": (("U", "V", "theta_2"), ("eta_2", "eta_3", "theta_12", "theta_23")),
    },
    EXCEPTIONAL: {
        "d theta_22, d eta_1": (("theta_22", "eta_1", "theta_2"), ("eta_2", "eta_3", "theta_12", "theta_23")),
        "dU, d xi_3": (("U", "xi_3", "theta_2"), ("eta_2", "eta_3", "theta_12", "theta_23")),
    },
}
COMPARED = ("eta_2", "eta_3")


def _route_system(v: "_Verifier", keys, unknowns, basis, tag: str):
    # compared forms share their components across routes
    comps = {
        u: {b: param(f"c_{u}__{b.name}" if u in COMPARED else f"c{tag}_{u}__{b.name}") for b in basis}
        for u in unknowns
    }
    images = {label(u): DiffForm({(b,): c for b, c in comps[u].items()}, 1) for u in unknowns}
    eqs = []
    for key in keys:
        res = v.lhs(key) - v.rhs(key).replace_basis(images)
        eqs.extend(res.terms.values())
    return eqs, comps


def _span(sol, comps: dict) -> list[str]:
    out = []
    inverse = {c: b for b, c in comps.items()}
    for h in sol.free:
        d = sol.direction(h)
        f = DiffForm({(inverse[g],): c for g, c in d.items() if g in inverse}, 1)
        if f.terms and f.render() not in out:
            out.append(f.render())
    return out


def reconstruction_consistency(
    ctx: JetContext,
    tester: ZeroTester | None = None,
    readings: dict | None = None,
    errata: Iterable[str] | None = None,
) -> Report:
    """Solve eta_2, eta_3 along two independent routes and compare them.

    Each route treats its forms as unknown combinations of the frame and
    solves its identities linearly; the free unknowns span its ambiguity.
    The routes agree modulo both spans exactly when the union of their
    identities is solvable.
    """
    tester = tester or ZeroTester()
    mc = mc_coframe(ctx, errata=errata)
    v = _Verifier(ctx, mc, tester, readings, errata, PLANS[mc.branch])
    routes = ROUTES[mc.branch]
    lhs_syms = set()
    for keys, _ in routes.values():
        for key in keys:
            lhs_syms |= v.lhs(key).basis_symbols()
    basis = sorted(set(v.frame.labels) | set(v.frame.completion) | lhs_syms, key=lambda s: s.coord_key)
    report = Report(
        f"reconstruction-{mc.branch}",
        {"branch": mc.branch, "kappa": "symbolic" if ctx.kappa_symbolic else str(ctx.kappa), "basis": len(basis)},
    )
    all_eqs, all_unknowns = [], set()
    for i, (name, (keys, unknowns)) in enumerate(routes.items()):
        eqs, comps = _route_system(v, keys, unknowns, basis, str(i))
        flat = [c for u in unknowns for c in comps[u].values()]
        sol = solve_linear(eqs, flat, tester)
        spans = {u: _span(sol, comps[u]) for u in COMPARED}
        cname = f"route {name}"
        if sol.undetermined:
            report.add(Check(cname, UNDETERMINED, "?", "undetermined pivot"))
        elif sol.inconsistent:
            report.add(Check(cname, FAIL, render(sol.inconsistent[0]), "identities inconsistent"))
        else:
            solved = {
                u: DiffForm({(b,): sol.values[c] for b, c in comps[u].items() if sol.values[c].terms}, 1).render()
                for u in COMPARED
            }
            report.add(Check(cname, PASS, "0", "", {"uses": list(keys), "solution": solved, "ambiguity": spans}))
        all_eqs.extend(eqs)
        all_unknowns.update(flat)
    sol = solve_linear(all_eqs, sorted(all_unknowns, key=lambda s: s.name), tester)
    cname = "eta_2, eta_3 agree modulo the ambiguity spans"
    if sol.undetermined:
        report.add(Check(cname, UNDETERMINED, "?", "undetermined pivot"))
    elif sol.inconsistent:
        report.add(Check(cname, FAIL, render(sol.inconsistent[0]), "no common solution"))
    else:
        report.add(Check(cname, PASS))
    return report


# -- audit ------------------------------------------------------------------

def _failing(ctx, tester, readings, errata) -> list[str]:
    out = []
    for r in (verify_structure(ctx, tester, readings, errata), closure_check(ctx, tester, readings, errata)):
        out += [c.name for c in r.checks if c.status == FAIL]
    return out


def audit(ctx: JetContext, tester: ZeroTester | None = None) -> Report:
    """Show that every erratum and every reading of the branch is forced.

    An erratum passes when dropping it alone makes some identity or closure
    check fail; a reading passes when each of its alternatives does.
    """
    from .coframes import branch_of

    tester = tester or ZeroTester()
    branch = branch_of(ctx)
    report = Report(f"audit-{branch}", {"branch": branch, "kappa": "symbolic" if ctx.kappa_symbolic else str(ctx.kappa)})
    ids = [e.id for e in data.ERRATA if e.branch == branch]
    for e in data.ERRATA:
        if e.branch != branch:
            continue
        broken = _failing(ctx, tester, None, [i for i in ids if i != e.id])
        status = PASS if broken else FAIL
        reason = "" if broken else "the identities hold without this correction"
        report.add(Check(f"erratum {e.id}", status, "0", reason, {"fails_without": broken, "evidence": e.evidence}))
    for rd in data.READINGS:
        if rd.branch != branch:
            continue
        alts = {alt: _failing(ctx, tester, {rd.id: alt}, None) for alt in rd.alternatives}
        loose = [a for a, broken in alts.items() if not broken]
        status = FAIL if loose else PASS
        reason = f"alternatives also consistent: {loose}" if loose else ""
        report.add(Check(f"reading {rd.id}", status, "0", reason, {"chosen": rd.chosen, "alternatives": alts}))
    return report


__all__ = [
    "audit",
    "reconstruction_consistency",
    "ROUTES",
    "Step",
    "GENERIC_PLAN",
    "EXCEPTIONAL_PLAN",
    "StructureReport",
    "verify_structure",
    "closure_check",
    "abstract_system",
]
