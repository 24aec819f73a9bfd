"""Stepwise relaxed Lyapunov function search over one template.

Two modes share one loop.  ``parametric`` eliminates quantifiers with the
template parameters and the radius left free; ``grid`` decides every rational
candidate ``(u, r)`` exactly and keeps the survivors.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .dynamics import FieldError, LieChain, Template, VectorField, equilibrium_check, in_transverse_set
from .ideals import ResourceLimitError, chain_bound, default_order, groebner_basis, member
from .logic import (Formula, build_phi1, build_phi12, build_phi2, build_phi_tilde,
                    build_theta, build_theta_bar, conj, simplify, substitute)
from .polyring import Polynomial
from .realqe.api import QeConfig, QeResult, decide_closed, find_witness, qe
from .realqe.falsify import rational_points

MODES = ("parametric", "grid")
EXITS = ("res0-empty", "resi-empty", "fixed-point")


def default_grid_values(lo=-2, hi=2, step=Fraction(1, 2)) -> tuple:
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    n = int((hi - lo) / step)
    return tuple(lo + k * step for k in range(n + 1))


@dataclass(frozen=True)
class SearchConfig:
    """Search settings.

    ``max_order`` caps the iteration count below the chain bound; reaching the
    cap is reported like the fixed-point exit.  ``grid`` maps each parameter
    to its candidate values (grid mode only).
    """

    mode: str = "parametric"
    backend: str = "auto"
    grid: Mapping[str, Sequence] | None = None
    radii: tuple = (Fraction(1), Fraction(1, 2), Fraction(1, 4))
    max_order: int | None = None
    radius_symbol: str = "r"
    seed: int = 0
    budget_ms: int | None = 60_000
    verify_samples: int = 200
    max_chain: int = 16

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.max_order is not None and self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        radii = tuple(Fraction(r) for r in self.radii)
        if not radii or any(r <= 0 for r in radii):
            raise ValueError("radius candidates must be positive")
        object.__setattr__(self, "radii", radii)
        if self.grid is not None:
            object.__setattr__(self, "grid",
                               {k: tuple(Fraction(v) for v in vs) for k, vs in self.grid.items()})

    def qe_config(self, deadline: float | None) -> QeConfig:
        budget = None
        if deadline is not None:
            budget = max(1, int((deadline - time.monotonic()) * 1000))
        return QeConfig(backend=self.backend, seed=self.seed, budget_ms=budget)


# --------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class RlfCertificate:
    """A template instance claimed to be an RLF on the ball of radius ``radius``."""

    template: Template
    params: dict
    radius: Fraction
    iteration: int
    polynomial: Polynomial
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "template": str(self.template.body),
            "params": list(self.template.params),
            "state_vars": list(self.template.state_vars),
            "witness": {k: str(Fraction(v)) for k, v in self.params.items()},
            "radius": str(Fraction(self.radius)),
            "iteration": self.iteration,
            "rlf": str(self.polynomial),
            "evidence": self.evidence,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, doc: Mapping) -> "RlfCertificate":
        from .cli.parser import parse_poly

        params = tuple(doc["params"])
        state = tuple(doc["state_vars"])
        body = parse_poly(doc["template"], params + state)
        return cls(
            template=Template(params, state, body),
            params={k: Fraction(v) for k, v in doc["witness"].items()},
            radius=Fraction(doc["radius"]),
            iteration=int(doc["iteration"]),
            polynomial=parse_poly(doc["rlf"], state),
            evidence=dict(doc.get("evidence", {})),
        )


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    conditions: dict
    reason: str = ""
    samples: int = 0


def _decide(fm: Formula, config: QeConfig) -> QeResult:
    return decide_closed(simplify(fm), config)


def check_certificate(cert: RlfCertificate, f: VectorField,
                      config: SearchConfig = SearchConfig()) -> CertificateCheck:
    """Re-derive the RLF conditions at the witness and decide each one exactly.

    The transversality condition is decided over the first ``iteration``
    derivative blocks, which implies it for any larger chain bound.  A
    sampled pointwise check with the instantiated chain bound runs on top.
    """
    cond: dict = {}
    t = cert.template
    if set(cert.params) != set(t.params):
        return CertificateCheck(False, cond, "witness does not bind exactly the template parameters")
    if t.state_vars != f.state_vars:
        return CertificateCheck(False, cond, "template and field disagree on state variables")
    if cert.radius <= 0 or cert.iteration < 1:
        return CertificateCheck(False, cond, "radius and iteration must be positive")
    p = t.instantiate(cert.params)
    if p != cert.polynomial.embed(t.state_vars):
        return CertificateCheck(False, cond, "stored polynomial is not the template at the witness")
    qc = QeConfig(backend=config.backend, seed=config.seed, budget_ms=config.budget_ms)
    at = {config.radius_symbol: cert.radius}
    checks = [
        ("phi1", build_phi1(p, f, radius=config.radius_symbol)),
        ("phi2", build_phi2(p, f, radius=config.radius_symbol)),
        ("transverse", build_phi_tilde(p, f, cert.iteration, radius=config.radius_symbol)),
    ]
    for name, fm in checks:
        res = _decide(substitute(fm, at), qc)
        cond[name] = {"verdict": res.verdict, "backend": res.backend}
        if res.verdict is not True:
            why = res.reason if res.is_unknown else "decided false"
            return CertificateCheck(False, cond, f"{name}: {why}")
    # sampled pointwise layer
    try:
        bound = max(cert.iteration, chain_bound(p, f, max_chain=config.max_chain))
    except ResourceLimitError as e:
        return CertificateCheck(False, cond, f"chain bound: {e}")
    chain = LieChain(p, f)
    r2 = cert.radius * cert.radius
    seen = 0
    for pt in rational_points(f.dim, budget=config.verify_samples * 4, seed=config.seed,
                              scale=cert.radius):
        n2 = sum(v * v for v in pt)
        if not 0 < n2 < r2:
            continue
        seen += 1
        if not in_transverse_set(p, f, pt, bound, chain):
            cond["sampled"] = {"verdict": False, "point": [str(v) for v in pt]}
            return CertificateCheck(False, cond, "sampled point outside the transverse set", seen)
        if seen >= config.verify_samples:
            break
    cond["sampled"] = {"verdict": True, "points": seen, "bound": bound}
    return CertificateCheck(True, cond, "", seen)


def verify_certificate(cert: RlfCertificate, f: VectorField,
                       config: SearchConfig = SearchConfig()) -> bool:
    return check_certificate(cert, f, config).ok


# --------------------------------------------------------------------------
# outcomes

@dataclass
class Found:
    certificate: RlfCertificate
    trace: list = field(default_factory=list)
    kind = "found"

    @property
    def iteration(self) -> int:
        return self.certificate.iteration


@dataclass
class NoneForTemplate:
    exit: str
    iteration: int
    trace: list = field(default_factory=list)
    capped: bool = False
    kind = "none"


@dataclass
class Unknown:
    reason: str
    iteration: int = 0
    trace: list = field(default_factory=list)
    kind = "unknown"


Outcome = Found | NoneForTemplate | Unknown


@dataclass
class SearchState:
    """Loop state before iteration ``i``.

    ``res`` is a formula over ``params + (r,)`` in parametric mode and a list
    of surviving ``(u..., r)`` tuples in grid mode.  ``history`` keeps every
    earlier residual.
    """

    i: int
    template: Template
    chain: LieChain
    res: object
    history: list
    trace: list
    deadline: float | None
    exact: bool = True

    @property
    def free(self) -> tuple:
        return self.template.params


# --------------------------------------------------------------------------
# the loop

def _as_template(p: Template | Polynomial, f: VectorField) -> Template:
    if isinstance(p, Template):
        return p
    params = tuple(v for v in p.ring if v not in f.state_vars)
    return Template(params, f.state_vars, p)


def _check_inputs(f: VectorField, t: Template, config: SearchConfig):
    if t.state_vars != f.state_vars:
        raise FieldError(f"template state variables {t.state_vars} != field {f.state_vars}")
    if not equilibrium_check(f):
        raise FieldError("the origin is not an equilibrium of the field")
    if config.radius_symbol in t.ring:
        raise FieldError(f"radius symbol {config.radius_symbol!r} clashes with template variables")


def _candidates(t: Template, config: SearchConfig) -> list:
    grid = config.grid or {}
    missing = [u for u in t.params if u not in grid]
    values = []
    for u in t.params:
        values.append(grid[u] if u in grid else default_grid_values())
    if missing and config.grid is not None:
        raise ValueError(f"grid has no values for parameters {missing}")
    extra = sorted(set(grid) - set(t.params))
    if extra:
        raise ValueError(f"grid names unknown parameters {extra}")

    def pref(us):
        return (max((v.denominator for v in us), default=1),
                max((abs(v) for v in us), default=0),
                tuple((abs(v), -v) for v in us))

    out = []
    for us in sorted(itertools.product(*values), key=pref):
        for r in config.radii:
            out.append(tuple(us) + (r,))
    return out


def _bindings(t: Template, cand: tuple, rsym: str) -> dict:
    return {**dict(zip(t.params, cand[:-1])), rsym: cand[-1]}


def start(f: VectorField, p: Template | Polynomial,
          config: SearchConfig = SearchConfig()) -> SearchState | Outcome:
    """Compute the initial residual from the positivity conditions."""
    t = _as_template(p, f)
    _check_inputs(f, t, config)
    deadline = None if config.budget_ms is None else time.monotonic() + config.budget_ms / 1000
    chain = LieChain(t, f)
    rs = config.radius_symbol
    phi12 = build_phi12(t, f, radius=rs, chain=chain)
    trace: list = []
    if config.mode == "grid":
        survivors = []
        for cand in _candidates(t, config):
            res = _decide(substitute(phi12, _bindings(t, cand, rs)), config.qe_config(deadline))
            if res.is_unknown:
                return Unknown(f"Res0 at {_fmt(t, cand, rs)}: {res.reason}", 0, trace)
            if res.verdict:
                survivors.append(cand)
        trace.append({"i": 0, "stage": "res0", "survivors": [_fmt(t, c, rs) for c in survivors]})
        if not survivors:
            return Unknown("grid exhausted: no candidate satisfies the positivity conditions",
                           0, trace)
        return SearchState(1, t, chain, survivors, [survivors], trace, deadline)
    res = qe(phi12, t.params + (rs,), config.qe_config(deadline))
    trace.append({"i": 0, "stage": "res0", "result": str(res)})
    if res.is_unknown:
        return Unknown(f"Res0: {res.reason}", 0, trace)
    if res.is_false:
        return NoneForTemplate("res0-empty", 0, trace)
    fm = res.as_formula()
    return SearchState(1, t, chain, fm, [fm], trace, deadline, res.exact)


def _fixed_point(state: SearchState) -> bool | None:
    """True when ``L^{i+1}`` lies in ``<L^1..L^i>``; None when the basis blows a limit."""
    i = state.i
    try:
        basis = groebner_basis(state.chain.upto(i), default_order(state.template))
        return member(state.chain[i + 1], basis)
    except ResourceLimitError:
        return None


def _fmt(t: Template, cand: tuple, rs: str) -> dict:
    return {k: str(v) for k, v in _bindings(t, cand, rs).items()}


def _certificate(f: VectorField, t: Template, cand: tuple, i: int, backend: str,
                 config: SearchConfig) -> tuple:
    values = dict(zip(t.params, cand[:-1]))
    cert = RlfCertificate(t, values, cand[-1], i, t.instantiate(values),
                          {"theta": {"verdict": True, "backend": backend}})
    chk = check_certificate(cert, f, config)
    evidence = {**chk.conditions, **cert.evidence}
    return RlfCertificate(t, values, cand[-1], i, cert.polynomial, evidence), chk


def step(state: SearchState, f: VectorField, config: SearchConfig = SearchConfig()):
    """One loop iteration: success on ``θ^i``, else shrink by ``θ̄^i``."""
    if config.mode == "grid":
        return _grid_step(state, f, config)
    return _parametric_step(state, f, config)


def _after(state: SearchState, config: SearchConfig, nxt):
    """Loop guard shared by both modes; ``nxt`` is the new residual."""
    i = state.i
    cap = config.max_order is not None and i >= config.max_order
    fixed = _fixed_point(state)
    if fixed is None:
        return Unknown(f"ideal chain guard exceeded resource limits at i={i}", i, state.trace)
    if fixed or cap:
        state.trace.append({"i": i, "stage": "guard", "fixed_point": fixed, "capped": cap})
        if config.mode == "grid":
            return Unknown(f"no grid candidate succeeded up to order {i}", i, state.trace)
        return NoneForTemplate("fixed-point", i, state.trace, capped=cap and not fixed)
    return SearchState(i + 1, state.template, state.chain, nxt, state.history + [nxt],
                       state.trace, state.deadline, state.exact)


def _grid_step(state: SearchState, f: VectorField, config: SearchConfig):
    t, i, rs = state.template, state.i, config.radius_symbol
    theta = build_theta(t, f, i, radius=rs, chain=state.chain)
    for cand in state.res:
        res = _decide(substitute(theta, _bindings(t, cand, rs)), config.qe_config(state.deadline))
        if res.is_unknown:
            return Unknown(f"theta{i} at {_fmt(t, cand, rs)}: {res.reason}", i, state.trace)
        if res.verdict:
            cert, chk = _certificate(f, t, cand, i, res.backend, config)
            state.trace.append({"i": i, "stage": "theta", "success": _fmt(t, cand, rs)})
            if not chk.ok:
                return Unknown(f"candidate {_fmt(t, cand, rs)} failed verification: {chk.reason}",
                               i, state.trace)
            return Found(cert, state.trace)
    if config.max_order is not None and i >= config.max_order:
        state.trace.append({"i": i, "stage": "guard", "fixed_point": False, "capped": True})
        return Unknown(f"no grid candidate succeeded up to order {i}", i, state.trace)
    bar = build_theta_bar(t, f, i, radius=rs, chain=state.chain)
    survivors = []
    for cand in state.res:
        res = _decide(substitute(bar, _bindings(t, cand, rs)), config.qe_config(state.deadline))
        if res.is_unknown:
            return Unknown(f"theta_bar{i} at {_fmt(t, cand, rs)}: {res.reason}", i, state.trace)
        if res.verdict:
            survivors.append(cand)
    state.trace.append({"i": i, "stage": "theta_bar", "survivors": [_fmt(t, c, rs) for c in survivors]})
    if not survivors:
        return Unknown(f"grid exhausted at order {i}", i, state.trace)
    return _after(state, config, survivors)


def _parametric_step(state: SearchState, f: VectorField, config: SearchConfig):
    t, i, rs = state.template, state.i, config.radius_symbol
    free = t.params + (rs,)
    qc = config.qe_config(state.deadline)
    theta = build_theta(t, f, i, radius=rs, chain=state.chain)
    temp = qe(conj([state.res, theta]), free, qc)
    state.trace.append({"i": i, "stage": "theta", "result": str(temp)})
    if temp.is_unknown:
        return Unknown(f"theta{i}: {temp.reason}", i, state.trace)
    if not temp.is_false:
        return _parametric_found(state, f, config, temp)
    if config.max_order is not None and i >= config.max_order:
        state.trace.append({"i": i, "stage": "guard", "fixed_point": False, "capped": True})
        return NoneForTemplate("fixed-point", i, state.trace, capped=True)
    bar = build_theta_bar(t, f, i, radius=rs, chain=state.chain)
    res = qe(conj([state.res, bar]), free, config.qe_config(state.deadline))
    state.trace.append({"i": i, "stage": "theta_bar", "result": str(res)})
    if res.is_unknown:
        return Unknown(f"theta_bar{i}: {res.reason}", i, state.trace)
    if res.is_false:
        return NoneForTemplate("resi-empty", i, state.trace)
    state.exact = state.exact and res.exact
    return _after(state, config, res.as_formula())


def _parametric_found(state: SearchState, f: VectorField, config: SearchConfig, temp: QeResult):
    t, i, rs = state.template, state.i, config.radius_symbol
    free = t.params + (rs,)
    w = find_witness(temp.as_formula(), config.qe_config(state.deadline), order=free)
    if not w.found:
        return Unknown(f"theta{i} holds somewhere but no rational witness: {w.status} {w.reason}",
                       i, state.trace)
    cand = tuple(w.point.get(v, Fraction(0)) for v in free)
    if not (temp.exact and state.exact):
        # over-approximated residual: the witness must pass every earlier stage exactly
        qc = config.qe_config(state.deadline)
        stages = [build_phi12(t, f, radius=rs, chain=state.chain)]
        stages += [build_theta_bar(t, f, j, radius=rs, chain=state.chain) for j in range(1, i)]
        stages.append(build_theta(t, f, i, radius=rs, chain=state.chain))
        for fm in stages:
            res = _decide(substitute(fm, _bindings(t, cand, rs)), qc)
            if res.verdict is not True:
                return Unknown(f"witness {_fmt(t, cand, rs)} of an over-approximate residual "
                               f"failed an exact check", i, state.trace)
    cert, chk = _certificate(f, t, cand, i, temp.backend, config)
    state.trace.append({"i": i, "stage": "witness", "point": _fmt(t, cand, rs)})
    if not chk.ok:
        return Unknown(f"witness {_fmt(t, cand, rs)} failed verification: {chk.reason}",
                       i, state.trace)
    return Found(cert, state.trace)


def run(f: VectorField, p: Template | Polynomial, config: SearchConfig = SearchConfig()):
    """Run the search to an outcome: Found, NoneForTemplate or Unknown."""
    state = start(f, p, config)
    while isinstance(state, SearchState):
        state = step(state, f, config)
    return state


def outcome_json(out) -> dict:
    doc: dict = {"outcome": out.kind, "trace": out.trace}
    if isinstance(out, Found):
        doc["certificate"] = out.certificate.to_json()
        doc["iteration"] = out.certificate.iteration
    elif isinstance(out, NoneForTemplate):
        doc.update(exit=out.exit, iteration=out.iteration, capped=out.capped)
    else:
        doc.update(reason=out.reason, iteration=out.iteration)
    return doc


__all__ = ["SearchConfig", "SearchState", "RlfCertificate", "CertificateCheck", "Found",
           "NoneForTemplate", "Unknown", "run", "start", "step", "verify_certificate",
           "check_certificate", "outcome_json", "default_grid_values", "MODES", "EXITS"]
