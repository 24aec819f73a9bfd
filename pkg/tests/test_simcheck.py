import math
from fractions import Fraction

import numpy as np
import pytest

from rlfgen.dynamics import VectorField
from rlfgen.polyring import Polynomial
from rlfgen.rlfg import RlfCertificate
from rlfgen.simcheck import (KERNELS_ENV, FloatPoly, ValidationConfig, lie_vs_fd, numba_kernels,
                             numpy_kernels, select_kernels, simulate, validate_rlf)

XY = ("x", "y")
x, y = Polynomial.variables(XY)
LINEAR = VectorField(XY, (-x, -y))
CM = VectorField(XY, (-x + y * y, -x * y))

# scipy DOP853 at rtol 1e-12 from (0.1, 0.1) to T = 20; decay on the centre manifold is algebraic
CM_NORM_T20 = 0.07904106


def _cert(t, a, iteration=3):
    return RlfCertificate(t, {"a": Fraction(a)}, Fraction(1), iteration, t.instantiate({"a": Fraction(a)}))


def test_linear_decay_closed_form():
    tr = simulate(LINEAR, [1.0, 0.0], 1e-3, 1.0)
    assert abs(tr.final[0] - math.exp(-1)) < 1e-6 and abs(tr.final[1]) < 1e-12
    assert len(tr) == 1001 and not tr.diverged
    assert np.allclose(np.diff(tr.times), 1e-3)


def test_single_step():
    tr = simulate(LINEAR, [1.0, 1.0], 0.1, 0.1)
    assert len(tr) == 2
    assert abs(tr.final[0] - (1 - 0.1 + 0.005 - 0.1 ** 3 / 6 + 0.1 ** 4 / 24)) < 1e-15


def test_simulate_rejects_bad_input():
    for args in ([1.0, 0.0], 0.0, 1.0), ([1.0, 0.0], 0.1, 0.01), ([math.nan, 0.0], 0.1, 1.0), ([1.0], 0.1, 1.0):
        with pytest.raises(ValueError):
            simulate(LINEAR, *args)


def test_centre_manifold_decay_matches_reference():
    tr = simulate(CM, [0.1, 0.1], 1e-3, 20.0)
    assert abs(np.linalg.norm(tr.final) - CM_NORM_T20) < 1e-6


@pytest.mark.xfail(strict=True, reason="centre-manifold decay is algebraic; see decisions ledger")
def test_centre_manifold_reaches_threshold():
    tr = simulate(CM, [0.1, 0.1], 1e-3, 20.0)
    assert np.linalg.norm(tr.final) < 1e-3


def test_divergence_truncates():
    blow = VectorField(XY, (x * x, -y))
    tr = simulate(blow, [1.0, 0.0], 1e-2, 5.0)
    assert tr.diverged and len(tr) < 501
    assert np.all(np.isfinite(tr.states))


def test_rk4_order():
    errs = []
    hs = [1e-1, 1e-2, 1e-3]
    for h in hs:
        tr = simulate(LINEAR, [1.0, 0.0], h, 1.0)
        errs.append(abs(tr.final[0] - math.exp(-1)))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert abs(slope - 4) <= 0.3


def test_lie_vs_fd_examples(ex1):
    f, p = ex1
    assert lie_vs_fd(p, f, [1.0, 1.0], 1e-4) < 1e-3
    assert lie_vs_fd(Polynomial.constant(XY, 3), f, [1.0, 1.0], 1e-4) < 1e-12
    d1 = lie_vs_fd(p, f, [1.0, 1.0], 1e-3)
    d2 = lie_vs_fd(p, f, [1.0, 1.0], 5e-4)
    assert 1.7 < d1 / d2 < 2.3


def test_lie_vs_fd_random_polynomials():
    rng = np.random.default_rng(0)
    for _ in range(5):
        terms = {}
        for _ in range(6):
            m = tuple(int(v) for v in rng.integers(0, 3, size=2))
            if sum(m) <= 4:
                terms[m] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        p = Polynomial(XY, terms)
        pts = rng.uniform(-0.7, 0.7, size=(100, 2))
        worst = max(lie_vs_fd(p, CM, pt, 1e-5) for pt in pts)
        assert worst < 1e-3


def test_float_poly_independent_of_exact():
    p = Fraction(1, 3) * x ** 3 * y - 2 * y * y + 5
    fp = FloatPoly(p, XY)
    for pt in ([0.5, -1.25], [2.0, 3.0], [0.0, 0.0]):
        exact = p.evaluate({"x": Fraction(pt[0]), "y": Fraction(pt[1])})
        assert abs(fp(pt) - float(exact)) < 1e-12


@pytest.mark.skipif(numba_kernels() is None, reason="numba not installed")
def test_numba_matches_numpy():
    a = simulate(CM, [0.3, -0.2], 1e-3, 2.0, kernels=numpy_kernels())
    b = simulate(CM, [0.3, -0.2], 1e-3, 2.0, kernels=numba_kernels())
    assert np.allclose(a.states, b.states, rtol=0, atol=1e-14)


def test_kernel_selection():
    assert select_kernels("numpy").name == "numpy"
    with pytest.raises(ValueError):
        select_kernels("fortran")
    assert KERNELS_ENV == "RLFGEN_KERNELS"


def test_csv_dump():
    tr = simulate(LINEAR, [1.0, 0.5], 0.25, 0.5)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,x1,x2"
    assert len(lines) == 4
    assert [float(v) for v in lines[1].split(",")] == [0.0, 1.0, 0.5]


def test_validate_certificate(eg51):
    f, t = eg51
    cfg = ValidationConfig(starts=5, T=2.0, fd_points=20, transverse_samples=30)
    rep = validate_rlf(_cert(t, 1), f, cfg)
    assert rep.all_monotone
    assert rep.fd_max_rel_error < 1e-3
    assert rep.transverse_agree == rep.transverse_total == 30
    assert rep.thresholds["monotone_tol"] == 1e-9
    doc = rep.as_dict()
    assert len(doc["final_norms"]) == 5


def test_wrong_certificate_flagged(eg51):
    f, t = eg51
    cfg = ValidationConfig(starts=10, T=2.0, fd_points=0, transverse_samples=0)
    rep = validate_rlf(_cert(t, -1), f, cfg)
    assert not rep.all_monotone and not rep.ok


def test_zero_duration_report(eg51):
    f, t = eg51
    rep = validate_rlf(_cert(t, 1), f, ValidationConfig(T=0, fd_points=0, transverse_samples=0))
    assert rep.final_norms == [] and rep.max_increase == [] and rep.fd_max_rel_error is None
    assert rep.transverse_total == 0
