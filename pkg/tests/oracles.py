"""Independent reference computations used to cross-check the package."""

from fractions import Fraction
import itertools

import sympy

from rlfgen.polyring import Polynomial


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.ring)
    syms = syms if isinstance(syms, tuple) else (syms,)
    expr = sympy.Integer(0)
    for m, c in p.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            t *= s ** e
        expr += t
    return expr


def from_sympy(expr, ring) -> Polynomial:
    syms = sympy.symbols(ring)
    syms = syms if isinstance(syms, tuple) else (syms,)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    return Polynomial(ring, terms)


def lie_sympy(p: Polynomial, comps, state_vars, k=1) -> Polynomial:
    """Chain rule by sympy: sum of partials times field components."""
    expr = to_sympy(p)
    fs = [to_sympy(c.embed(p.ring)) for c in comps]
    for _ in range(k):
        expr = sympy.expand(sum(sympy.diff(expr, sympy.Symbol(v)) * fc
                                for v, fc in zip(state_vars, fs)))
    return from_sympy(expr, p.ring)


def monomials_upto(n, deg):
    for m in itertools.product(range(deg + 1), repeat=n):
        if sum(m) <= deg:
            yield m


def member_linear_algebra(p: Polynomial, gens, cof_deg: int) -> bool:
    """Is p = sum c_i g_i with every cofactor of degree <= cof_deg? (linear system over Q)"""
    ring = p.ring
    n = len(ring)
    mons = list(monomials_upto(n, cof_deg))
    cols = []
    for g in gens:
        for m in mons:
            prod = g.mul_term(m, Fraction(1))
            cols.append(dict(prod.items()))
    rows = sorted({k for c in cols for k in c} | set(dict(p.items())))
    if not cols:
        return p.is_zero()
    A = sympy.Matrix([[c.get(r, 0) for c in cols] for r in rows])
    b = sympy.Matrix([dict(p.items()).get(r, 0) for r in rows])
    aug = A.row_join(b)
    return A.rank() == aug.rank()


def sign_changes_bisect(coeffs, lo: Fraction, hi: Fraction, depth=40) -> int:
    """Distinct real roots in (lo, hi] for a square-free polynomial, by exact bisection.

    Counts sign changes on a fine rational grid, plus exact zeros on grid points.
    """
    def ev(x):
        return sum(Fraction(c) * x ** i for i, c in enumerate(coeffs))

    steps = 2 ** 12
    xs = [lo + (hi - lo) * Fraction(k, steps) for k in range(steps + 1)]
    vals = [ev(x) for x in xs]
    count = 0
    for k in range(1, len(xs)):
        if vals[k] == 0:
            count += 1
        elif vals[k - 1] != 0 and (vals[k - 1] > 0) != (vals[k] > 0):
            count += 1
    return count
