import pytest

from mdkp_eds.extforms import (
    Coframe,
    DiffForm,
    FormError,
    Frame,
    FrameError,
    contact_form,
    contact_reduce,
    d,
    decompose,
    ext_d,
    label,
    parse_form,
    project_out,
    solve_factors,
    structure_d,
    wedge,
)
from mdkp_eds.jetspace import JetContext
from mdkp_eds.symexpr import ParseError, Verdict, ZeroTester, jet, parse
from mdkp_eds.symexpr.symbols import T, X, Y

NS = {"dt": d(T), "dx": d(X), "dy": d(Y)}


def test_parse_form_with_wedge():
    f = parse_form("u[x]*dt&dx + dx&dy - dy&dx", NS)
    assert f.degree == 2
    assert f == wedge(d(T), d(X)) * parse("u[x]") + wedge(d(X), d(Y)) * 2


def test_caret_is_not_a_wedge():
    with pytest.raises(ParseError):
        parse_form("dt^dx", NS)


def test_degree_cap():
    with pytest.raises(FormError):
        wedge(wedge(d(T), d(X)), wedge(d(Y), d(jet("x"))))


def test_mixed_degree_sum_rejected():
    with pytest.raises(FormError):
        d(T) + wedge(d(T), d(X))


def test_contact_form_and_its_differential():
    ctx = JetContext("0")
    th = contact_form("", ctx)
    assert th == DiffForm.one_form({jet(""): 1, T: -parse("u[t]"), X: -parse("u[x]"), Y: -parse("u[y]")})
    assert ext_d(th, ctx, on_shell=True) == wedge(d(T), d(jet("t"))) + wedge(d(X), d(jet("x"))) + wedge(d(Y), d(jet("y")))


def test_on_shell_contact_form_of_u_yy_is_reduced():
    ctx = JetContext("0", order=4)
    th = contact_form("y", ctx)
    assert jet("yy") not in th.basis_symbols()
    assert all(s.kind != "jet" or s.index.count("y") < 2 for s in th.free_symbols)


def test_contact_reduce_kills_the_ideal():
    ctx = JetContext("0")
    th = contact_form("", ctx)
    assert contact_reduce(wedge(th, d(X)), [th], ctx).is_zero_canonical()
    assert contact_reduce(wedge(th, d(X)) + wedge(d(T), d(Y)), [th], ctx) == wedge(d(T), d(Y))


def test_frame_rejects_dependent_rows():
    cf = Coframe(["a", "b"], [d(T) + d(X), (d(T) + d(X)) * 2])
    with pytest.raises(FrameError):
        Frame(cf)


def test_decompose_reports_completion_remainder():
    cf = Coframe(["a"], [d(T) + d(X) * parse("u[x]")])
    dec = decompose(d(T) + d(X) * parse("u[x]") + d(Y), cf)
    assert dec.coefficients == {("a",): parse("1")}
    assert dec.remainder == d(Y)


def test_solve_factors_splits_partner_terms():
    a, b = label("pa"), label("pb")
    f = wedge(DiffForm.basis(a), DiffForm.basis(b)) * parse("u[x]") + wedge(d(T), d(X))
    sol = solve_factors(f, [("pa", "Z")])
    assert sol.solved["Z"] == DiffForm.basis(b) * parse("u[x]")
    assert sol.residual == wedge(d(T), d(X))
    assert sol.ambiguity == {"Z": ["pa"]}
    assert project_out(f, ["pa"]) == wedge(d(T), d(X))


def test_structure_d_uses_given_equations():
    # d a = a^b, d b = 0: then d(d a) = d(a^b) = (a^b)^b = 0
    a, b = label("sa"), label("sb")
    dgen = {a: wedge(DiffForm.basis(a), DiffForm.basis(b)), b: DiffForm.zero(2)}
    da = structure_d(DiffForm.basis(a), dgen, {})
    assert da == dgen[a]
    assert structure_d(da, dgen, {}).is_zero_canonical()
    with pytest.raises(FormError):
        structure_d(DiffForm.basis(label("sc")), dgen, {})


def test_ext_d_refuses_abstract_generators():
    with pytest.raises(FormError):
        ext_d(DiffForm.basis(label("sa")))


def test_zero_test_on_forms():
    t = ZeroTester()
    f = d(T) * parse("ln(u[x]*u[y]) - ln(u[x]) - ln(u[y])")
    assert f.is_zero(t) is Verdict.ZERO
    assert f.prune(t).is_zero_canonical()
