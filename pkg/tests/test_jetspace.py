import pytest

from mdkp_eds.jetspace import JetContext, TruncationError, all_jets, is_internal, main_rhs, total_derivative
from mdkp_eds.symexpr import Verdict, ZeroTester, jet, parse, render, sym


def test_reduce_mdkp_at_kappa_zero():
    ctx = JetContext("0")
    assert ctx.reduce(parse("u[y,y]")) == parse("u[t,x] + (1/2*u[x]^2 + u[y])*u[x,x]")


def test_symbolic_family_rhs():
    expected = parse("u[t,x] + (1/2*(k+1)*u[x]^2 + u[y])*u[x,x] + k*u[x]*u[x,y]")
    assert main_rhs() == expected
    assert JetContext().reduce(parse("u[y,y]")) == expected


def test_internal_coordinates_have_at_most_one_y():
    ctx = JetContext("1", order=4)
    assert all(is_internal(s) for s in ctx.internal_jets())
    assert not is_internal(jet("yy"))
    for s in ctx.table:
        assert not is_internal(s)
        assert all(is_internal(a) for a in ctx.table[s].free_symbols if a.kind == "jet")


def test_jet_count():
    # u itself plus the jets of orders 1..3 in three variables
    assert len(all_jets(3)) == 1 + 3 + 6 + 10


def test_table_consistent_with_prolongation():
    ctx = JetContext("-1", order=5)
    t = ZeroTester()
    lhs = ctx.reduce(parse("u[x,y,y]"))
    rhs = ctx.total_derivative(ctx.reduce(parse("u[y,y]")), "x")
    assert t.is_zero(lhs - rhs) is Verdict.ZERO


def test_on_shell_commutators_vanish():
    ctx = JetContext(order=6)
    e = parse("u[x,y]*u[y] + u[t]^2")
    for a, b in [("t", "x"), ("t", "y"), ("x", "y")]:
        assert ctx.reduce(ctx.commutator(e, a, b, on_shell=True)).is_zero_canonical()


def test_truncation_is_enforced():
    with pytest.raises(TruncationError):
        total_derivative(sym(jet("xxx")), "x", order=3)
    with pytest.raises(TruncationError):
        JetContext("0", order=3).reduce(parse("u[x,x,y,y]"))


def test_base_variables_differentiate_to_one():
    assert total_derivative(parse("x^2*t"), "x") == parse("2*x*t")


def test_kappa_forms():
    assert JetContext("symbolic").kappa_symbolic
    assert render(JetContext("-3/2").kappa) == "-3/2"
