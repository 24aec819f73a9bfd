"""Closed formulas with hand-checked truth values, shared by the differential tests."""

from rlfgen.cli.parser import parse_poly
from rlfgen.logic import And, Atom, Exists, Forall, Or, implies, negate

RING = ("x", "y", "z")


def A(text, rel):
    return Atom(parse_poly(text, RING), rel)


def ALL(vs, body):
    return Forall(tuple(vs), body)


def EX(vs, body):
    return Exists(tuple(vs), body)


CLOSED = [
    ("sq-nonneg", ALL("x", A("x^2", ">=")), True),
    ("sq-neg", EX("x", A("x^2", "<")), False),
    ("sqrt2", EX("x", A("x^2 - 2", "=")), True),
    ("shifted-sq", ALL("x", A("x^2 + 1", ">")), True),
    ("sqrt-total", ALL("x", EX("y", A("y^2 - x", "="))), False),
    ("sq-function", ALL("x", EX("y", A("y - x^2", "="))), True),
    ("sum-sq-neg", EX("xy", A("x^2 + y^2", "<")), False),
    ("circle-line", EX("xy", And((A("x^2 + y^2 - 1", "="), A("x + y - 1", ">")))), True),
    ("am-gm", ALL("xy", A("x^2 + y^2 - 2*x*y", ">=")), True),
    ("am-gm-strict", ALL("xy", A("x^2 + y^2 - 2*x*y", ">")), False),
    ("cbrt2", EX("x", A("x^3 - 2", "=")), True),
    ("quartic-pos", ALL("x", A("x^4 - x^2 + 1", ">")), True),
    ("quartic-touch", ALL("x", A("x^4 - 2*x^2 + 1", ">")), False),
    ("no-real-root", EX("x", A("x^2 - x + 1", "<")), False),
    ("inverse-total", ALL("x", EX("y", A("x*y - 1", "="))), False),
    ("inverse-nonzero", ALL("x", EX("y", Or((A("x", "="), A("x*y - 1", "="))))), True),
    ("neg-pair", EX("xy", And((A("x*y - 1", ">"), A("x + y", "<")))), True),
    ("disc-product", EX("xy", And((A("x^2 + y^2 - 1", "<"), A("x*y - 1", ">")))), False),
    ("disc-bound", ALL("xy", implies(A("x^2 + y^2 - 1", "<"), A("x + y - 2", "<"))), True),
    ("disc-tight", ALL("xy", implies(A("x^2 + y^2 - 1", "<"), A("x + y - 1", "<"))), False),
    ("exists-forall", EX("x", ALL("y", A("y^2 + x", ">="))), True),
    ("forall-exists", ALL("y", EX("x", A("x + y^2", "<"))), True),
    ("annihilator", EX("x", ALL("y", A("x*y", "="))), True),
    ("below-sqrt", ALL("x", EX("y", A("y^2 - x", "<"))), False),
    ("three-sq", ALL("xyz", A("x^2 + y^2 + z^2", ">=")), True),
    ("plane-ball-open", EX("xyz", And((A("x + y + z - 1", "="),
                                       A("3*x^2 + 3*y^2 + 3*z^2 - 1", "<")))), False),
    ("plane-ball-closed", EX("xyz", And((A("x + y + z - 1", "="),
                                         A("3*x^2 + 3*y^2 + 3*z^2 - 1", "<=")))), True),
    ("odd-monotone", ALL("x", implies(A("x", ">"), A("x^3 + x", ">"))), True),
    ("quintic", EX("x", A("x^5 - x - 1", "=")), True),
    ("am-gm-2", ALL("xy", implies(And((A("x", ">"), A("y", ">"))), A("x^2 - 2*x*y + y^2", ">="))), True),
]

assert len(CLOSED) == 30

# negations double the corpus without new hand checks
NEGATED = [(f"not-{n}", negate(fm), not v) for n, fm, v in CLOSED]
