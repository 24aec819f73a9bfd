from fractions import Fraction

import pytest
from hypothesis import given, settings

from rlfgen.dynamics import (INFINITE, FieldError, LieChain, Rank, Template, VectorField,
                             equilibrium_check, in_transverse_set, lie_derivative, pointwise_rank)
from rlfgen.polyring import Polynomial

from conftest import XY, polynomials
from oracles import lie_sympy

x, y = Polynomial.variables(XY)


def test_example1_chain(ex1):
    f, p = ex1
    expected = [x + y * y, -x + 2 * y * y, x + 4 * y * y, -x + 8 * y * y]
    assert [lie_derivative(p, f, k) for k in range(4)] == expected
    chain = LieChain(p, f)
    assert chain.upto(3) == expected[1:]


def test_example2_rank(ex1):
    f, p = ex1
    assert pointwise_rank(p, f, (0, 0), 2) == INFINITE
    assert pointwise_rank(p, f, (1, 1), 2) == Rank(1)
    assert pointwise_rank(p, f, (2, 1), 2) == Rank(2)
    assert str(pointwise_rank(p, f, (0, 0), 2)) == "∞"


def test_transverse_examples(ex1):
    f, p = ex1
    # L1(1,1) = 1 > 0, L2(2,1) = 6 > 0
    assert not in_transverse_set(p, f, (1, 1), 2)
    assert not in_transverse_set(p, f, (2, 1), 2)
    assert not in_transverse_set(p, f, (0, 0), 2)
    # L1(1,0) = -1
    assert in_transverse_set(p, f, (1, 0), 2)


def test_template_lie_is_parametric(eg51):
    f, t = eg51
    L1 = lie_derivative(t.body, f)
    a, xx, yy = Polynomial.variables(t.ring)
    # frozen oracle: -2x(a*y^2 + x - y^2)
    assert L1 == -2 * xx * (a * yy * yy + xx - yy * yy)
    assert L1 == lie_sympy(t.body, f.components, f.state_vars)


def test_parameter_coherence(eg51):
    f, t = eg51
    for a in (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)):
        inst = t.instantiate({"a": a})
        for k in range(4):
            lhs = lie_derivative(inst, f, k)
            rhs = lie_derivative(t.body, f, k).substitute({"a": a}).embed(XY)
            assert lhs == rhs


def test_chain_of_lyapunov_candidate_on_axis(eg51):
    f, _ = eg51
    chain = LieChain(x * x + y * y, f)
    on_axis = [chain[k].substitute({"x": 0}) for k in (1, 2, 3)]
    assert on_axis[0].is_zero() and on_axis[1].is_zero()
    assert on_axis[2] == Polynomial(XY, {(0, 4): -4})
    assert chain[3].evaluate({"x": 0, "y": 1}) == -4
    assert in_transverse_set(x * x + y * y, f, (0, 1), 3)


def test_order_zero_and_negative(ex1):
    f, p = ex1
    assert lie_derivative(p, f, 0) == p
    with pytest.raises(ValueError):
        lie_derivative(p, f, -1)
    with pytest.raises(ValueError):
        pointwise_rank(p, f, (0, 0), 0)


def test_field_validation():
    with pytest.raises(FieldError):
        VectorField(XY, (x,))
    with pytest.raises(FieldError):
        Template(("x",), XY, x)
    a, xx, yy = Polynomial.variables(("a",) + XY)
    t = Template(("a",), XY, a * xx)
    with pytest.raises(FieldError):
        t.instantiate({})
    f = VectorField(XY, (-x, -y))
    with pytest.raises(FieldError):
        pointwise_rank(t.body, f, (1, 1), 2)
    with pytest.raises(FieldError):
        pointwise_rank(x, f, (1, 1, 1), 2)


def test_equilibrium_check():
    assert equilibrium_check(VectorField(XY, (-x + y * y, -x * y)))
    assert not equilibrium_check(VectorField(XY, (-x + 1, -y)))


@settings(max_examples=200)
@given(polynomials(), polynomials(), polynomials(), polynomials(), polynomials())
def test_lie_properties(p, q, f1, f2, g1):
    f = VectorField(XY, (f1, f2))
    g = VectorField(XY, (g1, f2))
    # linearity
    assert lie_derivative(p + 3 * q, f) == lie_derivative(p, f) + 3 * lie_derivative(q, f)
    # Leibniz
    assert lie_derivative(p * q, f) == p * lie_derivative(q, f) + q * lie_derivative(p, f)
    # composition of orders
    assert lie_derivative(lie_derivative(p, f, 1), f, 1) == lie_derivative(p, f, 2)
    # additivity in the field
    h = VectorField(XY, (f1 + g1, f2 + f2))
    assert lie_derivative(p, h) == lie_derivative(p, f) + lie_derivative(p, g)
    assert lie_derivative(p, f) == lie_sympy(p, f.components, XY)
