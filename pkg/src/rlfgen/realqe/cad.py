"""Cylindrical algebraic decomposition for one prenex quantifier prefix.

The default projection takes all coefficients, discriminants and pairwise
resultants; ``projection="collins"`` adds principal subresultant coefficients
of reducta.  Both are computed with sympy.  Lifting isolates roots
over algebraic sample points; sign tests combine interval refinement with a
resultant-based exact zero test.  Evaluation is partial: a cylinder is only
lifted while the body's truth value is still open.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from ..logic import FALSE, TRUE, And, Atom, Const, Formula, Not, Or, conj, disj, simplify
from ..polyring import Polynomial
from . import univariate as uv
from .univariate import AlgebraicNumber


class CadError(RuntimeError):
    pass


class BudgetExceeded(CadError):
    pass


class Degenerate(CadError):
    pass


class NotDefinable(CadError):
    """Projection factors do not separate true cells from false cells."""


# --------------------------------------------------------------------------
# dict polynomials over the level variables: {exponent tuple: int}

def _to_intdict(p: Polynomial, order: Sequence[str]) -> dict:
    q = p.embed(tuple(order))
    den = 1
    for _, c in q.items():
        den = den * c.denominator // _gcd(den, c.denominator)
    return {m: int(c * den) for m, c in q.items()}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _level(d: dict) -> int:
    lv = 0
    for m in d:
        for i in range(len(m) - 1, -1, -1):
            if m[i]:
                lv = max(lv, i + 1)
                break
    return lv


def _sp(d: dict, gens_idx: Sequence[int], symbols) -> sympy.Poly:
    terms = {tuple(m[i] for i in gens_idx): c for m, c in d.items()}
    return sympy.Poly.from_dict(terms, *[symbols[i] for i in gens_idx], domain="ZZ")


def _from_sp(poly: sympy.Poly, gens_idx: Sequence[int], n: int) -> dict:
    out = {}
    for m, c in poly.terms():
        full = [0] * n
        for i, e in zip(gens_idx, m):
            full[i] = e
        out[tuple(full)] = int(c)
    return out


def _subs_rational(d: dict, point: dict) -> dict:
    """Substitute Fraction coordinates; result has Fraction coefficients."""
    out: dict = {}
    for m, c in d.items():
        m2 = list(m)
        v = Fraction(c)
        for i, val in point.items():
            if m2[i]:
                v *= val ** m2[i]
                m2[i] = 0
        if v:
            k = tuple(m2)
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _vars_of(d: dict) -> set:
    used = set()
    for m in d:
        for i, e in enumerate(m):
            if e:
                used.add(i)
    return used


def _ipow(lo: Fraction, hi: Fraction, e: int):
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo ** e, hi ** e
    if e % 2 == 0:
        if lo <= 0 <= hi:
            return Fraction(0), max(a, b)
        return min(a, b), max(a, b)
    return a, b


def _interval_eval(d: dict, boxes: dict):
    tot_lo = tot_hi = Fraction(0)
    for m, c in d.items():
        lo = hi = Fraction(c)
        for i, e in enumerate(m):
            if e:
                a, b = _ipow(*boxes[i], e)
                cands = (lo * a, lo * b, hi * a, hi * b)
                lo, hi = min(cands), max(cands)
        tot_lo += lo
        tot_hi += hi
    return tot_lo, tot_hi


def _normalise_dict(d: dict) -> tuple:
    """Primitive with positive leading coefficient (lex on reversed exponents)."""
    g = 0
    for c in d.values():
        g = _gcd(g, abs(c))
    lead = max(d, key=lambda m: m[::-1])
    s = 1 if d[lead] > 0 else -1
    return {m: s * c // g for m, c in d.items()}, s


def _key(d: dict):
    return tuple(sorted(d.items()))


# --------------------------------------------------------------------------

@dataclass
class Factor:
    fid: int
    poly: dict
    level: int  # 1-based index of the main variable


@dataclass
class LeafCell:
    sample: tuple
    signs: dict
    truth: bool
    full_dim: bool


@dataclass
class CadStats:
    factors: int = 0
    cells: int = 0
    zero_tests: int = 0
    per_level: list = field(default_factory=list)


class Cad:
    """Partial CAD for ``Q_{f+1} v_{f+1} ... Q_n v_n . body`` with free ``v_1..v_f``.

    ``quantifiers`` holds ``"A"`` or ``"E"`` for each bound level.
    """

    def __init__(self, variables: Sequence[str], nfree: int, quantifiers: Sequence[str],
                 body: Formula, deadline: float | None = None, projection: str = "reduced"):
        if projection not in PROJECTIONS:
            raise ValueError(f"unknown projection {projection!r}")
        self.projection = projection
        self.vars = tuple(variables)
        self.n = len(self.vars)
        self.nfree = nfree
        self.quants = tuple(quantifiers)
        if len(self.quants) != self.n - nfree:
            raise ValueError("one quantifier per bound variable")
        self.deadline = deadline
        self.symbols = sympy.symbols(" ".join(f"_v{i}" for i in range(self.n)) + " _z", seq=True)
        self.zsym = self.symbols[-1]
        self.stats = CadStats()
        self.factors: list[Factor] = []
        self._by_key: dict = {}
        self.atoms: list = []
        self.body = self._compile(simplify(body))
        self._project()

    # -- setup --------------------------------------------------------------
    def _tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("CAD time budget exhausted")

    def _register(self, d: dict) -> tuple:
        """Factor ``d`` and register its irreducible factors; returns (const sign, [(fid, e)])."""
        if not d:
            return 0, []
        if _level(d) == 0:
            c = next(iter(d.values()))
            return (1 if c > 0 else -1), []
        lv = _level(d)
        idx = list(range(lv))
        poly = _sp(d, idx, self.symbols)
        coeff, facs = poly.factor_list()
        sign = 1 if coeff > 0 else -1
        out = []
        for fp, e in facs:
            fd = _from_sp(fp, idx, self.n)
            if _level(fd) == 0:
                c = next(iter(fd.values()))
                if c < 0 and e % 2:
                    sign = -sign
                continue
            fd, s = _normalise_dict(fd)
            if s < 0 and e % 2:
                sign = -sign
            k = _key(fd)
            if k not in self._by_key:
                fac = Factor(len(self.factors), fd, _level(fd))
                self.factors.append(fac)
                self._by_key[k] = fac.fid
            out.append((self._by_key[k], e))
        return sign, out

    def _compile(self, fm: Formula):
        if isinstance(fm, Const):
            return ("const", fm.value)
        if isinstance(fm, Atom):
            return self._atom(fm.poly, fm.rel)
        if isinstance(fm, Not) and isinstance(fm.arg, Atom):
            a = fm.arg
            rel = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "=": "!=", "!=": "="}[a.rel]
            return self._atom(a.poly, rel)
        if isinstance(fm, And):
            return ("and", [self._compile(a) for a in fm.args])
        if isinstance(fm, Or):
            return ("or", [self._compile(a) for a in fm.args])
        raise CadError(f"CAD body must be quantifier-free, got {type(fm).__name__}")

    def _atom(self, poly: Polynomial, rel: str):
        d = _to_intdict(poly, self.vars)
        sign, facs = self._register(d)
        self.atoms.append((sign, facs, rel))
        return ("atom", len(self.atoms) - 1)

    def _project(self):
        for k in range(self.n, 1, -1):
            self._tick()
            level_facs = [f for f in self.factors if f.level == k]
            main = k - 1
            gens = [main] + list(range(main))
            new = (self._collins(level_facs, gens, main) if self.projection == "collins"
                   else self._reduced(level_facs, gens, main))
            for q in new:
                self._tick()
                if q.is_zero:
                    continue
                d = _from_sp(q, gens, self.n)
                if _level(d) >= 1:
                    self._register(d)
            self.stats.per_level.append((k, len(level_facs)))
        self.stats.factors = len(self.factors)
        self.by_level = {k: [f for f in self.factors if f.level == k] for k in range(1, self.n + 1)}

    def _reduced(self, level_facs, gens, main) -> list:
        # every coefficient, discriminants and pairwise resultants
        new: list = []
        polys = [_sp(f.poly, gens, self.symbols) for f in level_facs]
        for P in polys:
            new.extend(_as_full(c, P) for c in _coeffs_in_main(P))
            if P.degree(0) >= 2:
                new.append(_as_full(P.resultant(P.diff(self.symbols[main])), P))
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                self._tick()
                new.append(_as_full(polys[i].resultant(polys[j]), polys[i]))
        return new

    def _collins(self, level_facs, gens, main) -> list:
        # coefficients plus principal subresultant coefficients of reducta
        new: list = []
        reducta = {}
        for f in level_facs:
            P = _sp(f.poly, gens, self.symbols)
            reds = []
            R = P
            while R.degree(0) >= 1:
                reds.append(R)
                if _coeffs_in_main(R)[0].is_ground:
                    break
                R = _reductum(R)
            reducta[f.fid] = reds
            new.extend(_as_full(c, P) for c in _coeffs_in_main(P))
            for R in reds:
                if R.degree(0) >= 2:
                    new.extend(_pscs(R, R.diff(self.symbols[main])))
        ids = [f.fid for f in level_facs]
        for a_i in range(len(ids)):
            for b_i in range(a_i + 1, len(ids)):
                for Ra in reducta[ids[a_i]]:
                    for Rb in reducta[ids[b_i]]:
                        self._tick()
                        new.extend(_pscs(Ra, Rb))
        return new

    # -- sign determination ----------------------------------------------------
    def sign_of(self, d: dict, point: Sequence, nonzero: bool = False) -> int:
        """Exact sign of ``d`` at ``point`` (coordinates for the first len(point) variables)."""
        rat = {i: v for i, v in enumerate(point) if not isinstance(v, AlgebraicNumber)}
        q = _subs_rational(d, rat)
        if not q:
            return 0
        used = _vars_of(q)
        if not used:
            c = next(iter(q.values()))
            return 1 if c > 0 else -1
        alg = sorted(used)
        if len(alg) == 1:
            i = alg[0]
            a = point[i]
            coeffs = [Fraction(0)] * (max(m[i] for m in q) + 1)
            for m, c in q.items():
                coeffs[m[i]] += c
            r = uv.primitive(uv.divmod_q(coeffs, a.poly)[1])
            if not r:
                return 0
            unit = [0] * self.n
            rd = {}
            for e, c in enumerate(r):
                if c:
                    unit[i] = e
                    rd[tuple(unit)] = c
            return self._refine_sign({i: a}, rd)
        if nonzero:
            return self._refine_sign({i: point[i] for i in alg}, q)
        for _ in range(12):
            s = self._interval_sign({i: point[i] for i in alg}, q)
            if s is not None:
                return s
            for i in alg:
                point[i].refine(2)
        return self._exact_sign({i: point[i] for i in alg}, q)

    def _interval_sign(self, alg: dict, q: dict):
        lo, hi = _interval_eval(q, {i: (a.lo, a.hi) for i, a in alg.items()})
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        return None

    def _refine_sign(self, alg: dict, q: dict) -> int:
        for _ in range(4000):
            s = self._interval_sign(alg, q)
            if s is not None:
                return s
            self._tick()
            for a in alg.values():
                a.refine(2)
        raise Degenerate("sign refinement did not converge")

    def _exact_sign(self, alg: dict, q: dict) -> int:
        self.stats.zero_tests += 1
        idx = sorted(alg)
        z = self.zsym
        expr = z - sum(sympy.Rational(c.numerator, c.denominator) *
                       sympy.Mul(*[self.symbols[i] ** m[i] for i in idx]) for m, c in q.items())
        for i in idx:
            self._tick()
            expr = _eliminate(expr, self.symbols[i], alg[i].poly)
        Z = _univariate(expr, z)
        if not Z:
            raise Degenerate("zero-test resultant vanished identically")
        if Z[0] != 0:
            return self._refine_sign(alg, q)
        # nonzero roots of Z satisfy |z| > |c0| / (|c0| + max|c_i|) once the zero root is divided out
        rest = list(Z)
        while rest and rest[0] == 0:
            rest.pop(0)
        c0 = abs(Fraction(rest[0]))
        delta = c0 / (c0 + max(abs(Fraction(c)) for c in rest[1:])) if len(rest) > 1 else Fraction(1)
        for _ in range(4000):
            lo, hi = _interval_eval(q, {i: (a.lo, a.hi) for i, a in alg.items()})
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if -delta < lo and hi < delta:
                return 0
            self._tick()
            for a in alg.values():
                a.refine(2)
        raise Degenerate("zero test did not converge")

    # -- lifting ----------------------------------------------------------------
    def roots_at(self, fac: Factor, point: Sequence):
        """Real roots of ``fac`` in its main variable over ``point``; None if nullified."""
        k = fac.level - 1
        rat = {i: v for i, v in enumerate(point) if not isinstance(v, AlgebraicNumber)}
        q = _subs_rational(fac.poly, rat)
        alg = sorted(_vars_of(q) - {k})
        if not alg:
            coeffs = [Fraction(0)] * (max((m[k] for m in q), default=0) + 1)
            for m, c in q.items():
                coeffs[m[k]] += c
            c = uv.primitive(coeffs)
            if not c:
                return None
            return uv.real_roots(c)
        # nullification check
        by_deg: dict = {}
        for m, c in q.items():
            mm = list(m)
            e = mm[k]
            mm[k] = 0
            by_deg.setdefault(e, {})[tuple(mm)] = c
        if all(self.sign_of(cd, list(point)) == 0 for cd in by_deg.values()):
            return None
        if len(alg) == 1:
            return self._roots_one_algebraic(q, k, alg[0], point[alg[0]])
        # eliminate algebraic coordinates
        k_sym = self.symbols[k]
        expr = sum(sympy.Rational(c.numerator, c.denominator) *
                   sympy.Mul(*[self.symbols[i] ** e for i, e in enumerate(m) if e]) for m, c in q.items())
        for i in alg:
            self._tick()
            expr = _eliminate(expr, self.symbols[i], point[i].poly)
        Rc = _univariate(expr, k_sym)
        if not Rc:
            raise Degenerate("lifting resultant vanished identically")
        out = []
        for beta in uv.real_roots(Rc):
            pt = list(point) + [beta]
            if self.sign_of(fac.poly, pt) == 0:
                out.append(beta)
        return out

    def _roots_one_algebraic(self, q: dict, k: int, i: int, alpha: AlgebraicNumber) -> list:
        """Roots of ``q(alpha, y)`` via gcds in ``Q(alpha)[y]``."""
        K = uv.NumberField(alpha.poly)
        dy = max(m[k] for m in q)
        coeffs = [[Fraction(0)] * (max(m[i] for m in q) + 1) for _ in range(dy + 1)]
        for m, c in q.items():
            coeffs[m[k]][m[i]] += c
        qa = K.ptrim([K.reduce(c) for c in coeffs])
        if not qa:
            return None
        if len(qa) == 1:
            return []
        # R(y) = res_t(q(t, y), m(t)) carries every candidate root
        t, ysym = self.symbols[i], self.symbols[k]
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** m[i] * ysym ** m[k]
                   for m, c in q.items())
        R = _univariate(_eliminate(expr, t, alpha.poly), ysym)
        if not R:
            raise Degenerate("lifting resultant vanished identically")
        out = []
        for mu in uv.irreducible_factors(R):
            g = K.pgcd(qa, [(Fraction(c),) for c in mu])
            if len(g) <= 1:
                continue
            all_roots = len(g) == len(mu)
            for lo, hi in uv.isolate_real_roots(mu):
                beta = uv.make_real(mu, lo, hi)
                if all_roots:
                    out.append(beta)
                    continue
                if not isinstance(beta, AlgebraicNumber):
                    if not K.peval(g, beta):
                        out.append(beta)
                    continue
                s_lo = self._field_sign(K, K.peval(g, lo), alpha)
                s_hi = self._field_sign(K, K.peval(g, hi), alpha)
                if s_lo * s_hi < 0:
                    out.append(beta)
        return uv.sort_reals(out)

    def _field_sign(self, K, e: tuple, alpha: AlgebraicNumber) -> int:
        if not e:
            return 0
        d = {}
        for j, c in enumerate(e):
            if c:
                d[(j,)] = c
        for _ in range(4000):
            lo, hi = _interval_eval(d, {0: (alpha.lo, alpha.hi)})
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self._tick()
            alpha.refine(2)
        raise Degenerate("field sign did not converge")

    def stack(self, k: int, point: list) -> list:
        """Cells of the cylinder over ``point`` at level ``k`` (1-based).

        Each cell is ``(value, signs, is_section)``.
        """
        self._tick()
        facs = self.by_level.get(k, [])
        if k == 1:
            return self._base_stack(facs)
        roots: list = []  # [value, set(fids)]
        null = set()
        for f in facs:
            rs = self.roots_at(f, point)
            if rs is None:
                null.add(f.fid)
                continue
            for b in rs:
                for entry in roots:
                    if uv.compare(entry[0], b) == 0:
                        entry[1].add(f.fid)
                        break
                else:
                    roots.append([b, {f.fid}])
        from functools import cmp_to_key
        roots.sort(key=cmp_to_key(lambda u, w: uv.compare(u[0], w[0])))
        samples: list = []
        if not roots:
            samples.append((Fraction(0), set(), False))
        else:
            samples.append((uv.sample_below(roots[0][0]), set(), False))
            for j, (b, zs) in enumerate(roots):
                samples.append((b, zs, True))
                if j + 1 < len(roots):
                    samples.append((uv.sample_between(b, roots[j + 1][0]), set(), False))
            samples.append((uv.sample_above(roots[-1][0]), set(), False))
        cells = []
        for v, zs, sec in samples:
            pt = list(point) + [v]
            signs = {}
            for f in facs:
                if f.fid in null or f.fid in zs:
                    signs[f.fid] = 0
                else:
                    signs[f.fid] = self.sign_of(f.poly, pt, nonzero=True)
            cells.append((v, signs, sec))
            self.stats.cells += 1
        return cells

    def _base_stack(self, facs) -> list:
        # distinct irreducible univariate factors have simple, pairwise distinct roots,
        # so every sign follows from the root order and the sign at +infinity
        from functools import cmp_to_key
        roots = []
        top = {}
        for f in facs:
            c = [Fraction(0)] * (max(m[0] for m in f.poly) + 1)
            for m, v in f.poly.items():
                c[m[0]] += v
            c = uv.primitive(c)
            top[f.fid] = 1 if c[-1] > 0 else -1
            roots.extend((b, f.fid) for b in uv.real_roots(c))
        roots.sort(key=cmp_to_key(lambda u, w: uv.compare(u[0], w[0])))
        right = {f.fid: 0 for f in facs}
        for _, fid in roots:
            right[fid] += 1

        def signs(owner=None):
            return {fid: 0 if fid == owner else top[fid] * (-1) ** n for fid, n in right.items()}

        cells = []
        if not roots:
            cells.append((Fraction(0), signs(), False))
        else:
            cells.append((uv.sample_below(roots[0][0]), signs(), False))
            for j, (b, fid) in enumerate(roots):
                right[fid] -= 1
                cells.append((b, signs(fid), True))
                nxt = (uv.sample_between(b, roots[j + 1][0]) if j + 1 < len(roots)
                       else uv.sample_above(b))
                cells.append((nxt, signs(), False))
        self.stats.cells += len(cells)
        return cells

    # -- evaluation ---------------------------------------------------------------
    def _eval(self, node, signs):
        kind = node[0]
        if kind == "const":
            return node[1]
        if kind == "atom":
            sign, facs, rel = self.atoms[node[1]]
            s = sign
            for fid, e in facs:
                if fid not in signs:
                    return None
                s *= signs[fid] ** e
            return _holds(s, rel)
        vals = [self._eval(a, signs) for a in node[1]]
        if kind == "and":
            if any(v is False for v in vals):
                return False
            return None if any(v is None for v in vals) else True
        if any(v is True for v in vals):
            return True
        return None if any(v is None for v in vals) else False

    def _bound(self, k: int, point: list, signs: dict) -> bool:
        t = self._eval(self.body, signs)
        if t is not None:
            return t
        if k > self.n:
            raise CadError("body undetermined at full dimension")
        q = self.quants[k - 1 - self.nfree]
        for v, s, _ in self.stack(k, point):
            t = self._bound(k + 1, point + [v], {**signs, **s})
            if q == "E" and t:
                return True
            if q == "A" and not t:
                return False
        return q == "A"

    def leaves(self, first_only: bool = False) -> list:
        """Truth value on every cell of the free-variable decomposition."""
        out: list = []

        def rec(k, point, signs, full):
            if k > self.nfree:
                t = self._bound(k, point, signs)
                out.append(LeafCell(tuple(point), dict(signs), t, full))
                return first_only and t and full
            t = self._eval(self.body, signs) if k > 1 else None
            if t is not None:
                # truth already fixed on the whole cylinder; pad the sample with zeros
                pad = [Fraction(0)] * (self.nfree - len(point))
                out.append(LeafCell(tuple(point + pad), dict(signs), t, full))
                return first_only and t and full
            for v, s, sec in self.stack(k, point):
                if rec(k + 1, point + [v], {**signs, **s}, full and not sec):
                    return True
            return False

        rec(1, [], {}, True)
        return out

    def decide(self) -> bool:
        if self.nfree:
            raise CadError("decide() needs a closed formula")
        return self._bound(1, [], {})

    # -- solution formulas ---------------------------------------------------------
    def solution_formula(self, free_names: Sequence[str], leaves: list | None = None) -> Formula:
        leaves = self.leaves() if leaves is None else leaves
        if all(c.truth for c in leaves):
            return TRUE
        if not any(c.truth for c in leaves):
            return FALSE
        fids = [f.fid for f in self.factors if f.level <= self.nfree]
        # cells cut short at a lower free level leave deeper signs unknown (None)
        sig = lambda c: tuple(c.signs.get(i) for i in fids)
        true_sigs = sorted({sig(c) for c in leaves if c.truth}, key=repr)
        false_sigs = {sig(c) for c in leaves if not c.truth}
        allowed_all = frozenset((-1, 0, 1))

        def meets(c, sgn):
            # clause may share a point with the cell of signature sgn
            return all(s is None or s in al for s, al in zip(sgn, c))

        def contains(c, sgn):
            return all(al == allowed_all if s is None else s in al for s, al in zip(sgn, c))

        clauses = []
        for t in true_sigs:
            allowed = [allowed_all if s is None else frozenset((s,)) for s in t]
            if any(meets(allowed, f) for f in false_sigs):
                raise NotDefinable("projection factors do not separate the solution set")
            # greedy literal relaxation against the false signatures
            for j in range(len(allowed)):
                if t[j] is None:
                    continue
                for cand in (allowed_all, frozenset((t[j], 0)) if t[j] else None):
                    if cand is None:
                        continue
                    trial = allowed[:j] + [cand] + allowed[j + 1:]
                    if not any(meets(trial, f) for f in false_sigs):
                        allowed = trial
                        break
            clause = tuple(allowed)
            if clause not in clauses:
                clauses.append(clause)
        # drop clauses whose true cells are all contained in the remaining ones
        keep = list(clauses)
        for c in list(clauses):
            others = [o for o in keep if o is not c]
            if others and all(any(contains(o, t) for o in others) for t in true_sigs):
                keep = others
        ring = tuple(free_names)
        polys = [self._factor_poly(i, ring) for i in fids]
        disjuncts = []
        for c in keep:
            lits = []
            for poly, al in zip(polys, c):
                if al == allowed_all:
                    continue
                lits.append(Atom(poly, _REL_OF[al]) if al in _REL_OF else Not(Atom(poly, "=")))
            disjuncts.append(conj(lits))
        return simplify(disj(disjuncts))

    def _factor_poly(self, fid: int, ring: tuple) -> Polynomial:
        d = self.factors[fid].poly
        terms = {m[: self.nfree]: c for m, c in d.items()}
        return Polynomial(ring, terms)


_REL_OF = {
    frozenset((1,)): ">",
    frozenset((-1,)): "<",
    frozenset((0,)): "=",
    frozenset((1, 0)): ">=",
    frozenset((-1, 0)): "<=",
}


def _holds(s: int, rel: str) -> bool:
    if rel == "<":
        return s < 0
    if rel == "<=":
        return s <= 0
    if rel == "=":
        return s == 0
    if rel == "!=":
        return s != 0
    if rel == ">":
        return s > 0
    return s >= 0


PROJECTIONS = ("reduced", "collins")


def _eliminate(expr, sym, mpoly) -> sympy.Expr:
    """Resultant of ``expr`` and the univariate ``mpoly(sym)`` with respect to ``sym``."""
    free = sorted(expr.free_symbols - {sym}, key=str)
    P = sympy.Poly(expr, sym, *free, domain="QQ")
    M = sympy.Poly(sum(c * sym ** e for e, c in enumerate(mpoly)), sym, *free, domain="QQ")
    if P.degree(0) <= 0:
        return P.as_expr() ** M.degree(0) if P.degree(0) == 0 else sympy.Integer(0)
    return P.resultant(M).as_expr()


def _univariate(expr, sym) -> tuple:
    poly = sympy.Poly(expr, sym, domain="QQ")
    return uv.primitive([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())])


def _coeffs_in_main(P: sympy.Poly) -> list:
    """Coefficients of ``P`` in its first generator, as polys in the rest."""
    rest = P.gens[1:]
    by: dict = {}
    for m, c in P.terms():
        by.setdefault(m[0], {})[m[1:]] = c
    out = []
    for e in sorted(by, reverse=True):
        if rest:
            out.append(sympy.Poly.from_dict(by[e], *rest, domain="ZZ"))
        else:
            out.append(sympy.Poly(by[e][()], P.gens[0], domain="ZZ"))
    return out


def _reductum(P: sympy.Poly) -> sympy.Poly:
    d = P.degree(0)
    terms = {m: c for m, c in P.terms() if m[0] < d}
    return sympy.Poly.from_dict(terms, *P.gens, domain="ZZ") if terms else sympy.Poly(0, *P.gens, domain="ZZ")


def _pscs(A: sympy.Poly, B: sympy.Poly) -> list:
    """Leading coefficients of the subresultant chain of ``A`` and ``B``."""
    if A.degree(0) < 1 or B.degree(0) < 1:
        return []
    if A.degree(0) < B.degree(0):
        A, B = B, A
    seq = sympy.subresultants(A, B)
    out = []
    for S in seq[2:]:
        if S.is_zero:
            continue
        cs = _coeffs_in_main(S)
        lead = cs[0]
        out.append(_as_full(lead, A))
    return out


def _as_full(c: sympy.Poly, A: sympy.Poly) -> sympy.Poly:
    """Re-embed a coefficient over ``A.gens[1:]`` into ``A.gens``."""
    terms = {(0,) + m: v for m, v in c.terms()}
    return sympy.Poly.from_dict(terms, *A.gens, domain="ZZ")
