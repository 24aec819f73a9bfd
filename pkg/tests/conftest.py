import json
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rlfgen.dynamics import Template, VectorField
from rlfgen.polyring import Polynomial

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

XY = ("x", "y")


def polys_xy():
    return Polynomial.variables(XY)


@pytest.fixture
def ex1():
    """Field (-x, y) with p = x + y^2."""
    x, y = polys_xy()
    return VectorField(XY, (-x, y)), x + y * y


@pytest.fixture
def eg51():
    """Field (-x + y^2, -x*y) with template x^2 + a*y^2."""
    x, y = polys_xy()
    a, xx, yy = Polynomial.variables(("a",) + XY)
    return VectorField(XY, (-x + y * y, -x * y)), Template(("a",), XY, xx * xx + a * yy * yy)


@pytest.fixture
def quad_template():
    a, b, x, y = Polynomial.variables(("a", "b") + XY)
    return Template(("a", "b"), XY, x * x + a * x * y + b * y * y)


@pytest.fixture
def sysfiles(tmp_path):
    ex1 = tmp_path / "ex1.json"
    ex1.write_text(json.dumps({"vars": ["x", "y"], "field": {"x": "-x", "y": "y"}}))
    eg = tmp_path / "eg51.json"
    eg.write_text(json.dumps({"vars": ["x", "y"], "params": ["a"],
                              "field": {"x": "-x + y^2", "y": "-x*y"},
                              "template": "x^2 + a*y^2"}))
    return {"ex1": str(ex1), "eg51": str(eg), "dir": tmp_path}


# --------------------------------------------------------------------------
# strategies

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polynomials(draw, ring=XY, max_deg=3, max_terms=5):
    n = len(ring)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n)))
        if sum(m) > max_deg:
            continue
        terms[m] = draw(rationals)
    return Polynomial(ring, terms)


@st.composite
def points(draw, ring=XY):
    return {v: draw(rationals) for v in ring}
