import pytest

from mdkp_eds.coverings import (
    COVERINGS,
    CoveringFileError,
    FormShapeError,
    ValidityError,
    builtin,
    covering_of,
    flatness,
    mutation_checks,
    read_covering_file,
    we_check,
    we_check_builtin,
    we_form,
)
from mdkp_eds.coverings.covering import default_kappa, user_covering
from mdkp_eds.coverings.data import WE_FORMS
from mdkp_eds.coverings.we import we_kappa
from mdkp_eds.extforms import d
from mdkp_eds.jetspace import JetContext
from mdkp_eds.report import FAIL, PASS
from mdkp_eds.symexpr import Verdict, ZeroTester, parse
from mdkp_eds.symexpr.symbols import T

TESTER = ZeroTester()


@pytest.mark.parametrize("cid", sorted(COVERINGS))
def test_builtin_flatness(cid):
    cov = builtin(cid)
    r = flatness(cov, cov.context(), 2, TESTER)
    assert r.status == PASS, r.to_json()
    assert len(r.checks) == 10
    assert r["equation-detection [D_t,D_y] v_0"].status == PASS


@pytest.mark.parametrize("kappa", ["0", "1", "1/3", "-5/2"])
def test_cov1_at_rational_kappa(kappa):
    cov = builtin("cov1", kappa)
    assert flatness(cov, cov.context()).status == PASS


@pytest.mark.parametrize("lam", ["0", "2", "-1/3", "lam"])
def test_cov6_lambda_family(lam):
    cov = builtin("cov6", "-1", lam)
    assert flatness(cov, cov.context()).status == PASS


def test_deeper_fibers():
    cov = builtin("cov2")
    assert flatness(cov, cov.context(7), 3).status == PASS


@pytest.mark.parametrize(
    "cid, kappa",
    [("cov6", "0"), ("cov3", "-1"), ("cov1", "-1"), ("cov2", "-3/2"), ("cov5", "k")],
)
def test_validity_guards(cid, kappa):
    with pytest.raises(ValidityError):
        builtin(cid, kappa)


def test_lambda_only_where_declared():
    with pytest.raises(ValidityError):
        builtin("cov1", None, "2")


def test_perturbed_covering_is_not_flat():
    cov = user_covering(
        "u[t,x] + (1/2*u[x]^2 + u[y])*u[x,x]",
        {"t": "(1/2*u[x]^2 + u[y])*v[1]", "y": "-u[x]*v[1]"},
        "0",
    )
    assert flatness(cov, cov.context()).status == FAIL


def test_defaults():
    assert default_kappa("cov1") == parse("k")
    assert default_kappa("cov4") == parse("-3/2")


COV1_FILE = """\
# cov1 at kappa = 0
Dt = (1/2*u[x]^2 - u[y])*v[1]
Dy = -u[x]*v[1]
rhs = u[t,x] + (1/2*u[x]^2 + u[y])*u[x,x]
kappa = 0
"""


def test_user_file_roundtrip():
    cov = read_covering_file(COV1_FILE)
    assert cov.same_data(builtin("cov1", "0"))
    assert flatness(cov, cov.context()).status == PASS


def test_user_file_kappa_sources():
    text = "\n".join(line for line in COV1_FILE.splitlines() if not line.startswith("kappa"))
    assert read_covering_file(text, "0").kappa == parse("0")
    with pytest.raises(CoveringFileError):
        read_covering_file(COV1_FILE, "1")


@pytest.mark.parametrize(
    "text",
    ["Dt = v[1]\nDy = v[1]", "Dt = v[1]\nDt = v[1]\nDy = 0\nrhs = 0", "Dq = 1\nDt = 0\nDy = 0\nrhs = 0", "Dt = (\nDy = 0\nrhs = 0", "garbage"],
)
def test_user_file_errors(text):
    with pytest.raises(CoveringFileError):
        read_covering_file(text)


def test_seeds_may_only_use_v0_v1():
    with pytest.raises(ValidityError):
        user_covering("u[t,x]", {"t": "v[2]", "y": "0"})


@pytest.mark.parametrize("wid", sorted(WE_FORMS))
def test_we_congruence(wid):
    r = we_check_builtin(wid, tester=TESTER)
    assert r.status == PASS, r.to_json()
    assert r["off-shell obstruction"].status == PASS


@pytest.mark.parametrize("wid", sorted(WE_FORMS))
def test_we_mutations_fail(wid):
    r = mutation_checks(wid, tester=TESTER)
    assert r.checks, "every form documents at least one mutation"
    assert r.status == PASS


@pytest.mark.parametrize("wid", sorted(WE_FORMS))
def test_we_form_matches_covering_and_flatness(wid):
    spec = WE_FORMS[wid]
    k = we_kappa(wid)
    cov = covering_of(we_form(wid, k), k)
    ref = builtin(spec.covering, k)
    for a in ("t", "y"):
        assert TESTER.is_zero(cov.seeds[a] - ref.seeds[a]) is Verdict.ZERO
    assert flatness(cov, cov.context()).status == PASS


@pytest.mark.parametrize("wid", ["WE1", "WE3", "WE6"])
def test_gauge_scaling_of_omega0(wid):
    k = we_kappa(wid)
    omega = we_form(wid, k)
    scaled = omega * parse("u[x]^2 + u[t]")
    assert we_check(scaled, JetContext(k), TESTER).status == PASS
    a, b = covering_of(omega, k), covering_of(scaled, k)
    for axis in ("t", "y"):
        assert TESTER.is_zero(a.seeds[axis] - b.seeds[axis]) is Verdict.ZERO


def test_we2_lambda_conflict():
    # the printed form is a covering at lam = 1 only
    assert we_check_builtin("WE2", lam="1").status == PASS
    assert we_check_builtin("WE2", lam="2").status == FAIL


def test_covering_form_shape():
    with pytest.raises(FormShapeError):
        covering_of(d(T), parse("k"))
