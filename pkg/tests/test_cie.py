import pytest

from mdkp_eds.coverings import CIE_CASES, ValidityError, cie_audit, cie_verify
from mdkp_eds.coverings.cie import applied_errata, case_for, default_kappa
from mdkp_eds.jetspace import JetContext
from mdkp_eds.report import FAIL, PASS
from mdkp_eds.symexpr import Verdict, ZeroTester, parse

TESTER = ZeroTester()

EXPECTED_W = {
    "2": "u[x,x,x]*v[1]^(k+1)/u[x,x]^2",
    "2-k2": "u[x,x,x]/(u[x,x]^2*v[1])",
    "2-k3/2": "u[x,x,x]/(u[x,x]^2*v[1]^(1/2))",
    "2-k3": "1/(u[x,x]*v[1])",
    "3": "3/8 + lam*u[x,x,x]/u[x,x]^2 - u[x]*u[x,x,x]/u[x,x]^2 - u[x,x,y]/u[x,x]^2",
}


@pytest.mark.parametrize("case", sorted(CIE_CASES))
def test_witness_passes(case):
    r = cie_verify(case, JetContext(default_kappa(case)), tester=TESTER)
    assert r.status == PASS, r.to_json()
    assert r["d omega_0 identity"].status == PASS
    assert r.witness.case == case


@pytest.mark.parametrize("case", sorted(EXPECTED_W))
def test_reconstructed_w(case):
    r = cie_verify(case, JetContext(default_kappa(case)), tester=TESTER)
    assert r["dW identity"].status == PASS
    assert TESTER.is_zero(r.witness.W - parse(EXPECTED_W[case])) is Verdict.ZERO


def test_theorem_one_has_no_w():
    r = cie_verify("1", JetContext(), tester=TESTER)
    assert r.witness.W is None
    assert "dW identity" not in r.names()


@pytest.mark.parametrize("kappa", ["0", "1", "1/3"])
def test_theorem_one_at_rational_kappa(kappa):
    assert cie_verify("1", JetContext(kappa), tester=TESTER).status == PASS


@pytest.mark.parametrize("lam", ["0", "2", "-1/3"])
def test_theorem_three_lambda(lam):
    assert cie_verify("3", JetContext("-1"), lam, TESTER).status == PASS


def test_subcase_dispatch():
    assert case_for("2", parse("-3")) == "2-k3"
    assert case_for("2", parse("-2")) == "2-k2"
    assert case_for("2", parse("k")) == "2"
    assert case_for("2-k3/2", parse("k")) == "2-k3/2"
    r = cie_verify("2", JetContext("-3"), tester=TESTER)
    assert r.config["case"] == "2-k3" and r.status == PASS


@pytest.mark.parametrize("theorem, kappa", [("1", "-1"), ("3", "0"), ("2-k3", "-2")])
def test_kappa_guards(theorem, kappa):
    with pytest.raises(ValidityError):
        cie_verify(theorem, JetContext(kappa), tester=TESTER)


def test_unknown_theorem():
    with pytest.raises(ValidityError):
        case_for("4", parse("k"))


def test_printed_dw_equations_fail():
    for case in ("2", "2-k3", "3"):
        r = cie_verify(case, JetContext(default_kappa(case)), tester=TESTER, errata=[])
        assert r["dW identity"].status == FAIL
        assert applied_errata(case, []) == []


def test_cie_audit():
    r = cie_audit(TESTER)
    assert r.status == PASS
    assert r.names() == ["erratum C1", "erratum C2", "erratum C3"]
