from mdkp_eds.linsolve import solve_linear, split_linear
from mdkp_eds.symexpr import ONE, ZERO, Verdict, ZeroTester, param, parse, sym

g, h, c = param("g"), param("h"), param("c")


def test_split_linear():
    coeffs, const = split_linear(parse("u[x]") * sym(g) + 3 * sym(h) + parse("u[y]"), [g, h])
    assert coeffs == {g: parse("u[x]"), h: parse("3")}
    assert const == parse("u[y]")


def test_unique_solution():
    s = solve_linear([sym(g) + sym(h) - 3, sym(g) - sym(h) - 1], [g, h])
    assert s.consistent and not s.free
    assert s.values == {g: parse("2"), h: ONE}


def test_free_unknowns_and_directions():
    s = solve_linear([sym(g) + sym(h) - 1, 2 * sym(g) + 2 * sym(h) - 2], [g, h])
    assert s.consistent
    assert len(s.free) == 1
    (f,) = s.free
    other = h if f is g else g
    assert s.direction(f) == {f: ONE, other: -ONE}
    assert s.values[f] == ZERO


def test_inconsistent_system():
    s = solve_linear([sym(g) - 1, sym(g) - 2], [g])
    assert not s.consistent
    assert s.inconsistent


def test_function_coefficients_use_zero_tests():
    # (sqrt(u)^2 - u) is zero only after a zero test
    zero_coeff = parse("sqrt(u[x])^2 - u[x]")
    s = solve_linear([parse("u[y]") * sym(c) - parse("u[y]*u[x]"), zero_coeff * sym(g)], [c, g], ZeroTester())
    t = ZeroTester()
    assert t.is_zero(s.values[c] - parse("u[x]")) is Verdict.ZERO
    assert g in s.free
