from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlfgen.dynamics import Template, VectorField
from rlfgen.logic import (FALSE, TRUE, And, Atom, Exists, Forall, Not, Or, atom, atoms,
                          build_phi, build_phi1, build_phi12, build_phi3, build_phi_bar,
                          build_phi_tilde, build_psi, build_theta, build_theta_bar, build_varphi,
                          build_varphi_block, conj, disj, evaluate, free_vars, implies, negate,
                          simplify, smt_formula, substitute, to_smtlib)
from rlfgen.polyring import Polynomial

from conftest import XY, points, polynomials

x, y = Polynomial.variables(XY)
RING = ("a", "r", "x", "y")
A, R, X, Y = Polynomial.variables(RING)


def test_empty_connectives():
    assert conj([]) == TRUE and disj([]) == FALSE
    assert str(And(())) == "true" and str(Or(())) == "false"
    assert simplify(Or(())) == FALSE


def test_simplify_examples():
    p = Atom(x, "<")
    assert simplify(And((TRUE, p))) == p
    assert simplify(Not(Atom(x, "<"))) == Atom(x, ">=")
    assert simplify(Atom(Polynomial.zero(XY), "=")) == TRUE
    assert simplify(And((p, And((p, Atom(y, ">")))))) == And((p, Atom(y, ">")))
    assert simplify(And((p, Atom(x, ">=")))) == FALSE
    assert simplify(atom(x, "!=")) == Not(Atom(x, "="))
    assert simplify(Forall(("x",), Atom(y, ">"))) == Atom(y, ">")


def test_varphi_example1(ex1):
    f, p = ex1
    phi = build_varphi(p, f, 2)
    L1 = (-x + 2 * y * y).embed(("r",) + XY)
    L2 = (x + 4 * y * y).embed(("r",) + XY)
    assert phi == Or((Atom(L1, "<"), And((Atom(L1, "="), Atom(L2, "<")))))
    assert build_varphi(p, f, 1) == Atom(L1, "<")
    for i in (1, 2, 3):
        assert len(atoms(build_varphi_block(p, f, i))) == i
    with pytest.raises(ValueError):
        build_varphi(p, f, 0)


def test_phi1_examples(eg51):
    f, t = eg51
    assert simplify(build_phi1(t, f)) == TRUE
    a, b, xx, yy = Polynomial.variables(("a", "b") + XY)
    fm = simplify(build_phi1(xx * xx + a * yy * yy + b, f))
    assert isinstance(fm, Atom) and fm.rel == "=" and str(fm.poly) == "b"


def test_free_variables(eg51):
    f, t = eg51
    N = 4
    for fm in (build_phi(t, f, N), build_phi12(t, f), build_phi3(t, f, N), build_theta(t, f, 2),
               build_theta_bar(t, f, 3), build_phi_bar(t, f, 2), build_phi_tilde(t, f, 3)):
        assert free_vars(fm) == {"a", "r"}


def test_non_equilibrium_rejected():
    f = VectorField(XY, (-x + 1, -y))
    with pytest.raises(ValueError):
        build_phi(x * x + y * y, f, 1)


def test_psi_theta(eg51):
    f, t = eg51
    assert build_psi(t, f, 1) == TRUE
    with pytest.raises(ValueError):
        build_psi(t, f, 0)
    with pytest.raises(ValueError):
        build_theta(t, f, 0)
    n2 = X * X + Y * Y
    L1 = -2 * X * X + 2 * (1 - A) * X * Y * Y
    expected = Forall(XY, implies(And((Atom(n2, ">"), Atom(n2 - R * R, "<"))), Atom(L1, "<")))
    assert build_theta(t, f, 1) == expected
    th, tb = build_theta(t, f, 3), build_theta_bar(t, f, 3)
    assert th.body.args[0] == tb.body.args[0]
    assert th.body.args[1].poly == tb.body.args[1].poly
    assert (th.body.args[1].rel, tb.body.args[1].rel) == ("<", "<=")


def test_phi_bar_scaffold(eg51):
    f, t = eg51
    N = 4
    bar = build_phi_bar(t, f, N)
    phi3 = build_phi3(t, f, N)
    disjuncts = bar.body.args[1].args
    assert Or(disjuncts[:-1]) == phi3.body.args[1]
    assert disjuncts[-1] == build_psi(t, f, N + 1)


@settings(max_examples=60)
@given(st.integers(1, 3), points(RING))
def test_validity_used_in_termination(k, pt):
    # blocks 1..N imply blocks 1..k or psi^{k+1}
    f = VectorField(XY, (-x + y * y, -x * y))
    tmpl = Template(("a",), XY, X * X + A * Y * Y)
    N = 4
    full = disj(build_varphi_block(tmpl, f, j) for j in range(1, N + 1))
    part = disj([*(build_varphi_block(tmpl, f, j) for j in range(1, k + 1)), build_psi(tmpl, f, k + 1)])
    assert (not evaluate(full, pt)) or evaluate(part, pt)


@settings(max_examples=150)
@given(polynomials(), polynomials(), st.sampled_from(["<", "<=", "=", "!=", ">", ">="]),
       st.sampled_from(["<", "<=", "=", ">"]), points())
def test_simplify_preserves_truth(p, q, r1, r2, pt):
    fm = Or((Not(And((atom(p, r1), TRUE, atom(q, r2)))), And((atom(p * q, r2), Or(())))))
    assert evaluate(simplify(fm), pt) == evaluate(fm, pt)
    assert evaluate(negate(fm), pt) != evaluate(fm, pt)


def test_substitute_respects_binders():
    fm = And((Atom(A, ">"), Forall(("a",), Atom(A + X, ">"))))
    out = substitute(fm, {"a": 1})
    assert out.args[0].poly.is_constant()
    assert out.args[1].body.poly == A + X


def test_smt_rendering():
    fm = Atom(Fraction(1, 2) * X, "<")
    assert smt_formula(fm) == "(< (* (/ 1 2) x) 0)"
    script = to_smtlib(Atom(A - 1, ">"))
    assert "(declare-fun a () Real)" in script
    assert script.strip().endswith("(check-sat)")
    neg = to_smtlib(Forall(("x",), Atom(x * x, ">=")), negate_goal=True)
    assert "(exists ((x Real))" in neg and "(< (* x x) 0)" in neg
    qf = to_smtlib(Exists(("x",), Atom(x * x - 2, "=")), "QF_NRA")
    assert "(declare-fun x () Real)" in qf and "exists" not in qf
    with pytest.raises(ValueError):
        to_smtlib(Forall(("x",), Atom(x, ">")), "QF_NRA")
    assert smt_formula(Atom(-3 * X, "!=")) == "(not (= (* (- 3) x) 0))"
