import os
from pathlib import Path

import pytest

from mdkp_eds.jetspace import JetContext
from mdkp_eds.mdkp import (
    EXCEPTIONAL,
    GENERIC,
    BranchError,
    abstract_system,
    audit,
    branch_of,
    closure_check,
    mc_coframe,
    reconstruction_consistency,
    structure_rhs,
    verify_structure,
)
from mdkp_eds.mdkp import data
from mdkp_eds.mdkp.structure import STAGE_A_KEYS
from mdkp_eds.extforms import label, wedge
from mdkp_eds.extforms import DiffForm
from mdkp_eds.report import FAIL, PASS, SKIPPED

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def generic():
    return JetContext()


@pytest.fixture(scope="module")
def exceptional():
    return JetContext("-1")


def _render_coframe(ctx):
    mc = mc_coframe(ctx)
    return "".join(f"{name} = {mc[name].render()}\n" for name in data.COFRAME_ORDER)


@pytest.mark.parametrize("kappa, fname", [(None, "mc_generic.txt"), ("-1", "mc_exceptional.txt")])
def test_mc_coframe_golden(kappa, fname):
    text = _render_coframe(JetContext(kappa))
    path = GOLDEN / fname
    if os.environ.get("MDKP_REGEN_GOLDEN"):
        path.write_text(text)
    assert text == path.read_text()


def test_branch_selection(generic, exceptional):
    assert branch_of(generic) == GENERIC
    assert branch_of(exceptional) == EXCEPTIONAL
    assert branch_of(JetContext("1/3")) == GENERIC
    with pytest.raises(BranchError):
        mc_coframe(exceptional, GENERIC)


def test_stage_a_lines_as_printed():
    theta0 = structure_rhs(GENERIC, "theta_0")
    expected = sum(
        (wedge(DiffForm.basis(label(a)), DiffForm.basis(label(b))) for a, b in
         [("eta_1", "theta_0"), ("xi_1", "theta_1"), ("xi_2", "theta_2"), ("xi_3", "theta_3")]),
        DiffForm.zero(2),
    )
    assert theta0 == expected
    assert structure_rhs(EXCEPTIONAL, "theta_0") == expected


@pytest.mark.parametrize("kappa", [None, "0", "1", "1/3", "-1"])
def test_stage_a_identities(kappa):
    r = verify_structure(JetContext(kappa), only=STAGE_A_KEYS)
    assert sorted(r.names()) == sorted(f"d{k}" for k in STAGE_A_KEYS)
    assert all(c.status == PASS and c.residual == "0" for c in r.checks)


def test_full_plan_generic(generic):
    r = verify_structure(generic)
    assert r.status == PASS
    assert r["dtheta_1"].status == SKIPPED
    assert {"dU", "dV", "deta_2"} <= set(r.names())
    assert "eta_2" in r.reconstructed


def test_full_plan_exceptional(exceptional):
    r = verify_structure(exceptional)
    assert r.status == PASS
    assert {"dtheta_23", "deta_3"} <= set(r.names())


@pytest.mark.parametrize("ctx_kappa", [None, "-1"])
def test_printed_errata_break_identities(ctx_kappa):
    r = verify_structure(JetContext(ctx_kappa), errata=[])
    assert r.status == FAIL


@pytest.mark.parametrize("kappa", [None, "-1"])
def test_closure(kappa):
    r = closure_check(JetContext(kappa))
    assert r.status == PASS
    for key in STAGE_A_KEYS + ("U",):
        assert r[f"d(d{key})"].status == PASS


def test_closure_fails_without_u_correction(generic):
    ids = [e.id for e in data.ERRATA if e.branch == GENERIC and e.id != "G7"]
    assert closure_check(generic, errata=ids)["d(dU)"].status == FAIL


def test_abstract_system_shapes():
    dgen, dfun = abstract_system(GENERIC)
    assert all(f.degree == 2 for f in dgen.values())
    assert all(f.degree == 1 for f in dfun.values())


@pytest.mark.parametrize("kappa", [None, "1/3", "-1"])
def test_reconstruction_consistency(kappa):
    r = reconstruction_consistency(JetContext(kappa))
    assert r.status == PASS
    final = r.checks[-1]
    assert final.name == "eta_2, eta_3 agree modulo the ambiguity spans"


def test_reconstruction_reports_spans(generic):
    r = reconstruction_consistency(generic)
    route = r["route d theta_22"]
    assert route.details["ambiguity"]


@pytest.mark.parametrize("erratum", ["G1", "G2"])
def test_reconstruction_sensitive_to_coframe_errata(generic, erratum):
    ids = [e.id for e in data.ERRATA if e.branch == GENERIC and e.id != erratum]
    assert reconstruction_consistency(generic, errata=ids).status == FAIL


@pytest.mark.parametrize("kappa", [None, "-1"])
def test_every_correction_is_forced(kappa):
    r = audit(JetContext(kappa))
    assert r.status == PASS
    branch = GENERIC if kappa is None else EXCEPTIONAL
    assert {f"erratum {e.id}" for e in data.ERRATA if e.branch == branch} <= set(r.names())


_XI2_TAIL = " - 3/64*u[x,x]^2*(8*u[x]*u[x,x,x] - 3*u[x,x]^2))*dt"


@pytest.mark.parametrize(
    "variant",
    [
        lambda s: s.replace(_XI2_TAIL, ")*dt"),
        lambda s: s.replace(_XI2_TAIL, ")*dt - 3/64*u[x,x]^2*(8*u[x]*u[x,x,x] - 3*u[x,x]^2)*dt"),
        lambda s: s.replace(_XI2_TAIL, ")*dt").replace(
            "+ u[x,x,x]/u[x,x]*dx", "+ (u[x,x,x]/u[x,x] - 3/64*u[x,x]^2*(8*u[x]*u[x,x,x] - 3*u[x,x]^2))*dx"
        ),
    ],
    ids=["dropped", "outside-prefactor", "on-dx"],
)
def test_exceptional_xi2_line_break_reading_is_forced(monkeypatch, exceptional, variant):
    printed = data.EXCEPTIONAL_COFRAME["xi_2"]
    assert _XI2_TAIL in printed
    monkeypatch.setitem(data.EXCEPTIONAL_COFRAME, "xi_2", variant(printed))
    assert verify_structure(exceptional, only=STAGE_A_KEYS)["dtheta_0"].status == FAIL
