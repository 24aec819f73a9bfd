"""Seeded rational sampling: counterexamples for universal formulas, witnesses for existential ones.

Sampling is sound in one direction only.  A returned point is re-checked by
exact rational evaluation; finding nothing proves nothing.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from ..logic import Exists, Forall, Formula, evaluate, is_quantifier_free, simplify


def _grid_values(levels: int = 3, span: int = 2) -> list:
    vals = {Fraction(0)}
    for j in range(levels + 1):
        d = 2 ** j
        for n in range(1, span * d + 1):
            vals.add(Fraction(n, d))
            vals.add(Fraction(-n, d))
    return sorted(vals, key=lambda v: (v.denominator, abs(v), v))


def rational_points(nvars: int, *, budget: int, seed: int = 0, scale: Fraction = Fraction(1)):
    """Deterministic stream of rational points: small grid first, then seeded random draws.

    Random draws mix uniform rationals in ``[-2, 2]`` with points shrunk towards
    the origin so small balls and thin regions get coverage.
    """
    grid = _grid_values()
    count = 0
    if nvars <= 3:
        cap = budget // 2
        for pt in itertools.product(grid[:9 if nvars > 1 else len(grid)], repeat=nvars):
            yield tuple(v * scale for v in pt)
            count += 1
            if count >= cap:
                break
    rng = random.Random(seed)
    while count < budget:
        den = rng.choice((1, 2, 4, 8, 16, 64, 256, 1024))
        shrink = Fraction(1, 2 ** rng.randrange(0, 12))
        pt = tuple(Fraction(rng.randint(-2 * den, 2 * den), den) * shrink * scale for _ in range(nvars))
        # thin-region moves: align a coordinate with a power of another
        if nvars >= 2 and rng.random() < 0.3:
            i, j = rng.sample(range(nvars), 2)
            e = rng.choice((1, 2, 3))
            c = Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4, 8)))
            pt = list(pt)
            pt[i] = c * pt[j] ** e
            pt = tuple(pt)
        yield pt
        count += 1


def _split(fm: Formula, kind):
    fm = simplify(fm)
    vars_: list = []
    while isinstance(fm, kind):
        vars_.extend(v for v in fm.vars if v not in vars_)
        fm = fm.body
    return vars_, fm


def falsify_universal(fm: Formula, budget: int = 2000, seed: int = 0,
                      scale: Fraction = Fraction(1)) -> dict | None:
    """Rational counterexample to a closed ``∀x. body``, or None.

    Every returned point has been re-checked to violate ``body`` exactly.
    """
    vars_, body = _split(fm, Forall)
    if not vars_ or not is_quantifier_free(body):
        return None
    for pt in rational_points(len(vars_), budget=budget, seed=seed, scale=scale):
        env = dict(zip(vars_, pt))
        if not evaluate(body, env):
            return env
    return None


def witness_existential(fm: Formula, budget: int = 2000, seed: int = 0,
                        scale: Fraction = Fraction(1)) -> dict | None:
    """Rational witness of a closed ``∃x. body``, or None."""
    vars_, body = _split(fm, Exists)
    if not vars_ or not is_quantifier_free(body):
        return None
    for pt in rational_points(len(vars_), budget=budget, seed=seed, scale=scale):
        env = dict(zip(vars_, pt))
        if evaluate(body, env):
            return env
    return None


def simple_rationals(nvars: int, max_den: int = 4, max_abs: int = 4) -> list:
    """Points ordered by largest denominator, then largest magnitude."""
    vals = sorted({Fraction(n, d) for d in range(1, max_den + 1)
                   for n in range(-max_abs * d, max_abs * d + 1)},
                  key=lambda v: (v.denominator, abs(v), -v))
    pts = list(itertools.product(vals, repeat=nvars))
    pts.sort(key=lambda p: (max((v.denominator for v in p), default=1),
                            max((abs(v) for v in p), default=0),
                            tuple((abs(v), -v) for v in p)))
    return pts


def sample_witness(body: Formula, variables: Sequence[str], max_den: int = 4,
                   max_abs: int = 4, limit: int = 20000) -> dict | None:
    """Smallest-denominator rational point satisfying a quantifier-free body."""
    for k, pt in enumerate(simple_rationals(len(variables), max_den, max_abs)):
        if k >= limit:
            break
        env = dict(zip(variables, pt))
        if evaluate(body, env):
            return env
    return None
