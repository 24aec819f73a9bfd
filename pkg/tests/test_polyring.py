from fractions import Fraction

import pytest
from hypothesis import given

from rlfgen.polyring import (GREVLEX, LEX, Polynomial, PolynomialLimitError, RingMismatchError,
                             add, check_limits, evaluate, mul, partial_derivative, reduce,
                             substitute)

from conftest import XY, points, polynomials, rationals

x, y = Polynomial.variables(XY)
RING3 = ("x", "y", "z")


def test_add_examples():
    assert add(x + y * y, -x + 2 * y * y) == 3 * y * y
    p = x * y - 3
    assert add(p, Polynomial.zero(XY)) == p
    assert (-x + 2 * y * y) + (x + 4 * y * y) == 6 * y * y


def test_mul_examples():
    assert mul(x + y, x - y) == x * x - y * y
    assert (x - 2 * y) * 1 == x - 2 * y
    assert (2 * y) * y == 2 * y * y


def test_ring_mismatch():
    z = Polynomial.variable(("x", "z"), "z")
    with pytest.raises(RingMismatchError):
        _ = x + z


def test_partial_derivative():
    p = x + y * y
    assert partial_derivative(p, "y") == 2 * y
    assert partial_derivative(p, "x") == Polynomial.constant(XY, 1)
    assert partial_derivative(Polynomial.constant(XY, 7), "x").is_zero()
    with pytest.raises(Exception):
        partial_derivative(p, "w")


def test_evaluate():
    assert evaluate(x + 4 * y * y, {"x": 2, "y": 1}) == 6
    assert evaluate(-x + 2 * y * y, {"x": 2, "y": 1}) == 0
    assert evaluate(Polynomial.zero(XY), {"x": 5, "y": -1}) == 0
    with pytest.raises(Exception):
        evaluate(x + y, {"x": 1})


def test_substitute():
    a, xx, yy = Polynomial.variables(("a",) + XY)
    p = xx * xx + a * yy * yy
    assert substitute(p, {"a": 1}).embed(XY) == x * x + y * y
    assert substitute(p, {"a": 0}).embed(XY) == x * x
    full = substitute(p, {"a": 2, "x": 1, "y": 3})
    assert full.is_constant() and full.constant_value() == evaluate(p, {"a": 2, "x": 1, "y": 3})


def test_reduce_examples():
    _, r = reduce(-x + 8 * y * y, [x, y * y], GREVLEX)
    assert r.is_zero()
    _, r = reduce(x + 4 * y * y, [-x + 2 * y * y], GREVLEX)
    assert not r.is_zero()
    _, r = reduce(x + 4 * y * y, [-x + 2 * y * y], LEX)
    assert not r.is_zero()
    qs, r = reduce(Polynomial.zero(XY), [x, y])
    assert r.is_zero() and all(q.is_zero() for q in qs)


def test_canonical_zero_and_render():
    p = Polynomial(XY, {(1, 0): Fraction(1, 2), (0, 1): 0})
    assert p == Polynomial(XY, {(1, 0): Fraction(1, 2)})
    assert (p - p).is_zero()
    assert str(p - p) == "0"
    assert str(Fraction(3, 4) * x * x * y - y) == "3/4*x^2*y - y"


def test_limits_guardrail():
    with pytest.raises(PolynomialLimitError):
        check_limits(x ** 9)
    assert check_limits(x ** 8) == x ** 8


@given(polynomials(RING3), polynomials(RING3), polynomials(RING3))
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p and p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(polynomials(), polynomials())
def test_leibniz(p, q):
    for v in XY:
        assert (p * q).diff(v) == p * q.diff(v) + q * p.diff(v)


@given(polynomials(), polynomials(), points())
def test_evaluation_homomorphism(p, q, pt):
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


@given(polynomials(RING3), rationals, rationals, rationals)
def test_substitute_then_evaluate(p, a, b, c):
    part = p.substitute({"x": a})
    assert part.evaluate({"y": b, "z": c}) == p.evaluate({"x": a, "y": b, "z": c})


@given(polynomials(), polynomials(), polynomials())
def test_reduce_identity(p, d1, d2):
    divs = [d for d in (d1, d2) if not d.is_zero()] or [x]
    for order in (GREVLEX, LEX):
        qs, r = reduce(p, divs, order)
        total = r
        for q, d in zip(qs, divs):
            total = total + q * d
        assert total == p
        heads = [d.leading_monomial(order) for d in divs]
        for m, _ in r.items():
            assert not any(all(a >= b for a, b in zip(m, h)) for h in heads)
