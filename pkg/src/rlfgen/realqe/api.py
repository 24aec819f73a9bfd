"""Public decision and elimination entry points with backend selection."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..logic import (FALSE, TRUE, And, Atom, Const, Exists, Forall, Formula, Not, Or,
                     conj, disj, embed, free_vars, is_quantifier_free, max_degree, simplify,
                     substitute)
from ..polyring import Polynomial
from . import univariate as uv
from .cad import BudgetExceeded, Cad, CadError, Degenerate, NotDefinable
from .falsify import falsify_universal, sample_witness, witness_existential
from .smt import SmtAdapter

BACKENDS = ("auto", "cad", "smt")


@dataclass(frozen=True)
class QeConfig:
    """Backend selection and resource envelope.

    ``relax`` enables slice relaxation beyond the CAD envelope: universally
    bound variables are fixed to 0, which yields a weaker formula that is
    still exact evidence of emptiness.
    """

    backend: str = "auto"
    max_vars: int = 4
    max_degree: int = 8
    seed: int = 0
    budget_ms: int | None = 60_000
    samples: int = 1500
    prefilter: bool = True
    relax: bool = True
    smt_command: str | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")


@dataclass(frozen=True)
class QeResult:
    """Outcome of a decision or elimination.

    ``kind`` is ``"true"``, ``"false"``, ``"formula"`` or ``"unknown"``.
    ``exact=False`` marks an over-approximation: a ``"false"`` verdict is still
    exact, anything else is only a necessary condition.  ``cause`` separates
    envelope violations from budget exhaustion and solver failures.
    """

    kind: str
    formula: Formula | None = None
    backend: str = ""
    exact: bool = True
    cause: str = ""
    reason: str = ""

    @property
    def is_true(self) -> bool:
        return self.kind == "true" and self.exact

    @property
    def is_false(self) -> bool:
        return self.kind == "false"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"

    @property
    def verdict(self):
        """True, False, or None."""
        if self.kind == "false":
            return False
        if self.kind == "true" and self.exact:
            return True
        return None

    def as_formula(self) -> Formula:
        if self.kind == "true":
            return TRUE
        if self.kind == "false":
            return FALSE
        if self.kind == "formula":
            return self.formula
        raise ValueError(f"no formula for an unknown result ({self.reason})")

    def __str__(self):
        if self.kind == "formula":
            tag = "" if self.exact else " (over-approximation)"
            return f"{self.formula}{tag}"
        if self.kind == "unknown":
            return f"unknown [{self.cause}] {self.reason}"
        return self.kind


def _result(fm: Formula, backend: str, exact: bool) -> QeResult:
    fm = simplify(fm)
    if fm == TRUE:
        return QeResult("true", TRUE, backend, exact)
    if fm == FALSE:
        return QeResult("false", FALSE, backend, True)
    return QeResult("formula", fm, backend, exact)


class _Unknown(Exception):
    def __init__(self, cause: str, reason: str):
        super().__init__(reason)
        self.cause = cause
        self.reason = reason


def _deadline(config: QeConfig):
    return None if config.budget_ms is None else time.monotonic() + config.budget_ms / 1000


# --------------------------------------------------------------------------
# CAD-based elimination

class _Eliminator:
    def __init__(self, config: QeConfig, order: Sequence[str]):
        self.config = config
        self.deadline = _deadline(config)
        self.order = list(order)
        self.exact = True

    def _free_order(self, fm: Formula) -> list:
        fv = free_vars(fm)
        known = [v for v in self.order if v in fv]
        return known + sorted(fv - set(known))

    def run(self, fm: Formula) -> Formula:
        fm = simplify(fm)
        if isinstance(fm, (Const, Atom)) or (isinstance(fm, Not) and isinstance(fm.arg, Atom)):
            return fm
        if isinstance(fm, And):
            # quantifier-free conjuncts go inside each quantified block as a guard
            # so the CAD can skip cells that the guard already rules out
            qf = [a for a in fm.args if is_quantifier_free(a)]
            if len(qf) < len(fm.args):
                pin = _pinned(qf)
                if pin is not None:
                    return self._cases(fm, *pin)
            guard = conj(qf)
            parts = list(qf)
            for a in fm.args:
                if is_quantifier_free(a):
                    continue
                if isinstance(a, (Forall, Exists)) and free_vars(guard) <= free_vars(a):
                    r = self._quantified(a, guard)
                else:
                    r = self.run(a)
                if r == FALSE:
                    return FALSE
                parts.append(r)
            return simplify(conj(parts))
        if isinstance(fm, Or):
            parts = []
            for a in fm.args:
                r = self.run(a)
                if r == TRUE and self.exact:
                    return TRUE
                parts.append(r)
            return simplify(disj(parts))
        if isinstance(fm, (Forall, Exists)):
            return self._quantified(fm, TRUE)
        raise TypeError(type(fm))

    def _cases(self, fm: Formula, atom: Atom, var: str, values: list) -> Formula:
        # a guard equation fixes var to finitely many rationals: substitute each one
        out = []
        for v in values:
            ring = tuple(self._free_order(fm))
            pinned = Atom(Polynomial.variable(ring, var) - v, "=")
            rest = self.run(substitute(fm, {var: v}))
            out.append(conj([pinned, embed(rest, ring)]))
        return simplify(disj(out))

    def _quantified(self, fm: Formula, guard: Formula) -> Formula:
        prefix = []
        body = fm
        while isinstance(body, (Forall, Exists)):
            q = "A" if isinstance(body, Forall) else "E"
            prefix.extend((q, v) for v in body.vars)
            body = body.body
        if not is_quantifier_free(body):
            body = self.run(body)
        return self._block(prefix, simplify(conj([guard, body])))

    def _block(self, prefix: list, body: Formula) -> Formula:
        live = free_vars(body)
        prefix = [(q, v) for q, v in prefix if v in live]
        if not prefix:
            return body
        bound = [v for _, v in prefix]
        free = [v for v in self._free_order(body) if v not in bound]
        nvars = len(free) + len(bound)
        deg = max_degree(body)
        cfg = self.config
        if nvars > cfg.max_vars or deg > cfg.max_degree:
            msg = (f"{nvars} variables (max {cfg.max_vars}), degree {deg} (max {cfg.max_degree})")
            if cfg.relax and prefix[0][0] == "A":
                return self._relax(prefix, body)
            raise _Unknown("envelope", msg)
        quick = _constant_strategy(prefix, body)
        if quick is not None:
            return quick
        quants = [q for q, _ in prefix]
        try:
            cad = Cad(free + bound, len(free), quants, body, deadline=self.deadline)
            if not free:
                return TRUE if cad.decide() else FALSE
            return cad.solution_formula(free)
        except BudgetExceeded as e:
            raise _Unknown("budget", str(e)) from None
        except NotDefinable as e:
            raise _Unknown("definability", str(e)) from None
        except (Degenerate, CadError) as e:
            raise _Unknown("degenerate", str(e)) from None

    def _relax(self, prefix: list, body: Formula) -> Formula:
        # instantiate each leading universal variable at 0 in turn
        lead = []
        for q, v in prefix:
            if q != "A":
                break
            lead.append(v)
        slices = []
        for v in lead:
            sub = simplify(substitute(body, {v: Fraction(0)}))
            inner = [(q, w) for q, w in prefix if w != v]
            slices.append(self._block(inner, sub) if inner else sub)
            if slices[-1] == FALSE:
                break
        self.exact = False
        return simplify(conj(slices))


_PROBES = (Fraction(0), Fraction(1), Fraction(-1))


def _constant_strategy(prefix: list, body: Formula):
    # a fixed choice for one player's variables that decides the body outright
    # decides the block under any quantifier order
    for q, verdict in (("A", FALSE), ("E", TRUE)):
        vs = [v for p, v in prefix if p == q]
        if not vs or len(vs) > 3:
            continue
        for pt in itertools.product(_PROBES, repeat=len(vs)):
            if simplify(substitute(body, dict(zip(vs, pt)))) == verdict:
                return verdict
    return None


def _pinned(parts: list):
    """First guard equation in one variable whose real roots are all rational."""
    for a in parts:
        if not (isinstance(a, Atom) and a.rel == "="):
            continue
        vs = [v for v in a.poly.ring if a.poly.degree(v) > 0]
        if len(vs) != 1:
            continue
        var = vs[0]
        coeffs = [Fraction(0)] * (a.poly.degree(var) + 1)
        for m, c in a.poly.items():
            coeffs[sum(m)] += c
        facs = uv.irreducible_factors(uv.primitive(coeffs))
        if facs and all(len(f) == 2 for f in facs):
            return a, var, sorted(Fraction(-f[0], f[1]) for f in facs)
    return None


def qe(fm: Formula, keep_free: Sequence[str] | None = None,
       config: QeConfig = QeConfig()) -> QeResult:
    """Quantifier-free equivalent of ``fm`` over ``keep_free``.

    Free variables of ``fm`` must be a subset of ``keep_free``; the result's
    free variables are a subset as well.  With the ``smt`` backend only closed
    formulas can be handled.
    """
    fv = free_vars(fm)
    keep = list(keep_free) if keep_free is not None else sorted(fv)
    extra = fv - set(keep)
    if extra:
        raise ValueError(f"free variables {sorted(extra)} not in keep_free")
    if config.backend == "smt" or (not fv and config.backend == "auto"):
        if not fv:
            return decide_closed(fm, config)
        return QeResult("unknown", backend="smt", cause="backend",
                        reason="the external adapter decides closed formulas only")
    el = _Eliminator(config, keep)
    try:
        out = el.run(fm)
    except _Unknown as u:
        return QeResult("unknown", backend="cad", cause=u.cause, reason=u.reason)
    return _result(simplify(embed(out, keep)), "cad", el.exact)


def decide_closed(fm: Formula, config: QeConfig = QeConfig()) -> QeResult:
    """Truth value of a closed formula."""
    if free_vars(fm):
        raise ValueError(f"formula has free variables {sorted(free_vars(fm))}")
    fm = simplify(fm)
    if isinstance(fm, Const):
        return _result(fm, "simplify", True)
    if isinstance(fm, (And, Or)):
        is_and = isinstance(fm, And)
        pending = None
        for a in fm.args:
            r = decide_closed(a, config)
            v = r.verdict
            if v is None:
                pending = pending or r
                continue
            if v is not is_and:
                return r
        if pending is not None:
            return pending
        return _result(TRUE if is_and else FALSE, "combined", True)
    if config.backend == "smt":
        return _smt(fm, config)
    if config.prefilter:
        if isinstance(fm, Forall):
            cex = falsify_universal(fm, budget=config.samples, seed=config.seed)
            if cex is not None:
                return QeResult("false", FALSE, "sampling", True,
                                reason="counterexample " + _fmt_point(cex))
        if isinstance(fm, Exists):
            w = witness_existential(fm, budget=config.samples, seed=config.seed)
            if w is not None:
                return QeResult("true", TRUE, "sampling", True, reason="witness " + _fmt_point(w))
    el = _Eliminator(config, [])
    try:
        out = el.run(fm)
        res = _result(out, "cad", el.exact)
        if res.verdict is not None:
            return res
        cause, reason = "envelope", "relaxation inconclusive"
    except _Unknown as u:
        cause, reason = u.cause, u.reason
    if config.backend == "auto":
        r = _smt(fm, config)
        if r.verdict is not None:
            return r
        reason = f"{reason}; {r.reason}"
    return QeResult("unknown", backend="cad", cause=cause, reason=reason)


def _smt(fm: Formula, config: QeConfig) -> QeResult:
    adapter = SmtAdapter(config.smt_command)
    if not adapter.available:
        return QeResult("unknown", backend="smt", cause="solver",
                        reason=f"external solver unavailable ({adapter.command})")
    verdict, detail = adapter.decide(fm, config.budget_ms)
    if verdict is None:
        cause = "budget" if detail.startswith("timeout") else "solver"
        return QeResult("unknown", backend="smt", cause=cause, reason=detail)
    return _result(TRUE if verdict else FALSE, "smt", True)


def _fmt_point(pt: dict) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in pt.items()) + ")"


# --------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class WitnessResult:
    status: str  # "found" | "none" | "unknown" | "non-rational"
    point: dict | None = None
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_witness(fm: Formula, config: QeConfig = QeConfig(),
                 order: Sequence[str] | None = None) -> WitnessResult:
    """Rational point satisfying ``fm``, preferring small denominators.

    ``fm`` is quantifier-free or an existential closure; the witness binds the
    existential variables (and any free ones) in ``order``.
    """
    fm = simplify(fm)
    vars_: list = []
    while isinstance(fm, Exists):
        vars_.extend(v for v in fm.vars if v not in vars_)
        fm = fm.body
    if not is_quantifier_free(fm):
        r = qe(fm, sorted(free_vars(fm)), config)
        if r.is_unknown:
            return WitnessResult("unknown", reason=r.reason)
        fm = r.as_formula()
    fv = free_vars(fm)
    names = [v for v in (order or []) if v in fv] + [v for v in vars_ if v in fv]
    names += sorted(fv - set(names))
    if fm == FALSE:
        return WitnessResult("none")
    if not names:
        return WitnessResult("found", {}) if fm == TRUE else WitnessResult("none")
    w = sample_witness(fm, names, max_den=4, max_abs=4,
                       limit=20000 if len(names) <= 2 else 6000)
    if w is not None:
        return WitnessResult("found", w)
    if len(names) > config.max_vars or max_degree(fm) > config.max_degree:
        return WitnessResult("unknown", reason="witness search outside the CAD envelope")
    try:
        cad = Cad(names, len(names), [], fm, deadline=_deadline(config))
        leaves = cad.leaves()
    except BudgetExceeded as e:
        return WitnessResult("unknown", reason=str(e))
    except CadError as e:
        return WitnessResult("unknown", reason=str(e))
    true = [c for c in leaves if c.truth]
    if not true:
        return WitnessResult("none")
    from .univariate import AlgebraicNumber
    rational = [c for c in true if not any(isinstance(v, AlgebraicNumber) for v in c.sample)]
    if not rational:
        return WitnessResult("non-rational", reason="satisfying set has no rational sample point")
    full = [c for c in rational if c.full_dim] or rational
    best = min(full, key=lambda c: (max(Fraction(v).denominator for v in c.sample),
                                    max(abs(Fraction(v)) for v in c.sample)))
    return WitnessResult("found", {n: Fraction(v) for n, v in zip(names, best.sample)})


__all__ = ["QeConfig", "QeResult", "WitnessResult", "qe", "decide_closed", "find_witness",
           "falsify_universal", "BACKENDS"]
