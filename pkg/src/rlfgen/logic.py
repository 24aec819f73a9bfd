"""First-order formulas over polynomial sign atoms, and the RLF constraint builders.

Formulas are immutable trees of :class:`Atom`, :data:`TRUE`/:data:`FALSE`,
:class:`Not`, :class:`And`, :class:`Or`, :class:`Forall` and :class:`Exists`.
Every atom compares one polynomial against zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .dynamics import LieChain, Template, VectorField, equilibrium_check
from .polyring import Polynomial, union_ring

RELATIONS = ("<", "<=", "=", "!=", ">", ">=")
_NEGATE = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "=": "!=", "!=": "="}
_PRETTY = {"<": "<", "<=": "≤", "=": "=", "!=": "≠", ">": ">", ">=": "≥"}


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Atom(Formula):
    poly: Polynomial
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def holds(self, value: Fraction) -> bool:
        r = self.rel
        if r == "<":
            return value < 0
        if r == "<=":
            return value <= 0
        if r == "=":
            return value == 0
        if r == "!=":
            return value != 0
        if r == ">":
            return value > 0
        return value >= 0

    def __str__(self):
        return f"{self.poly} {_PRETTY[self.rel]} 0"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def __str__(self):
        return f"¬({self.arg})"


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return "true"
        return " ∧ ".join(_paren(a) for a in self.args)


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return "false"
        if len(self.args) == 2 and isinstance(self.args[0], Not):
            return f"{_paren(self.args[0].arg)} → {_paren(self.args[1])}"
        return " ∨ ".join(_paren(a) for a in self.args)


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))

    def __str__(self):
        return f"∀{','.join(self.vars)}. ({self.body})"


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))

    def __str__(self):
        return f"∃{','.join(self.vars)}. ({self.body})"


def _paren(fm: Formula) -> str:
    if isinstance(fm, (And, Or)) and len(fm.args) > 1:
        return f"({fm})"
    return str(fm)


# --------------------------------------------------------------------------
# constructors

def atom(poly: Polynomial, rel: str) -> Formula:
    """Build an atom; ``!=`` is stored as ``¬(=)``."""
    if rel == "!=":
        return Not(Atom(poly, "="))
    return Atom(poly, rel)


def conj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def disj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


def implies(a: Formula, b: Formula) -> Formula:
    return Or((Not(a), b))


# --------------------------------------------------------------------------
# structural queries

def atoms(fm: Formula) -> list:
    out: list = []

    def walk(g):
        if isinstance(g, Atom):
            out.append(g)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(fm)
    return out


def free_vars(fm: Formula) -> set:
    if isinstance(fm, Atom):
        return set(fm.poly.support())
    if isinstance(fm, Const):
        return set()
    if isinstance(fm, Not):
        return free_vars(fm.arg)
    if isinstance(fm, (And, Or)):
        out: set = set()
        for a in fm.args:
            out |= free_vars(a)
        return out
    if isinstance(fm, (Forall, Exists)):
        return free_vars(fm.body) - set(fm.vars)
    raise TypeError(type(fm))


def bound_vars(fm: Formula) -> set:
    if isinstance(fm, (Forall, Exists)):
        return set(fm.vars) | bound_vars(fm.body)
    if isinstance(fm, Not):
        return bound_vars(fm.arg)
    if isinstance(fm, (And, Or)):
        out: set = set()
        for a in fm.args:
            out |= bound_vars(a)
        return out
    return set()


def is_quantifier_free(fm: Formula) -> bool:
    if isinstance(fm, (Forall, Exists)):
        return False
    if isinstance(fm, Not):
        return is_quantifier_free(fm.arg)
    if isinstance(fm, (And, Or)):
        return all(is_quantifier_free(a) for a in fm.args)
    return True


def max_degree(fm: Formula) -> int:
    return max((a.poly.total_degree() for a in atoms(fm)), default=0)


def count_atoms(fm: Formula) -> int:
    return len(atoms(fm))


def evaluate(fm: Formula, point: Mapping[str, Fraction]) -> bool:
    """Truth value of a quantifier-free formula at a rational point."""
    if isinstance(fm, Const):
        return fm.value
    if isinstance(fm, Atom):
        return fm.holds(fm.poly.evaluate(point))
    if isinstance(fm, Not):
        return not evaluate(fm.arg, point)
    if isinstance(fm, And):
        return all(evaluate(a, point) for a in fm.args)
    if isinstance(fm, Or):
        return any(evaluate(a, point) for a in fm.args)
    raise ValueError("cannot evaluate a quantified formula pointwise")


def substitute(fm: Formula, bindings: Mapping[str, Fraction]) -> Formula:
    """Replace free occurrences of variables by rationals."""
    if not bindings:
        return fm
    if isinstance(fm, Atom):
        keep = {v: c for v, c in bindings.items() if v in fm.poly.ring}
        return Atom(fm.poly.substitute(keep), fm.rel)
    if isinstance(fm, Const):
        return fm
    if isinstance(fm, Not):
        return Not(substitute(fm.arg, bindings))
    if isinstance(fm, (And, Or)):
        return type(fm)(tuple(substitute(a, bindings) for a in fm.args))
    if isinstance(fm, (Forall, Exists)):
        inner = {v: c for v, c in bindings.items() if v not in fm.vars}
        return type(fm)(fm.vars, substitute(fm.body, inner))
    raise TypeError(type(fm))


def embed(fm: Formula, ring: Sequence[str]) -> Formula:
    """Re-express every atom of a quantifier-free formula over ``ring``."""
    if isinstance(fm, Atom):
        return Atom(fm.poly.embed(ring), fm.rel)
    if isinstance(fm, Const):
        return fm
    if isinstance(fm, Not):
        return Not(embed(fm.arg, ring))
    if isinstance(fm, (And, Or)):
        return type(fm)(tuple(embed(a, ring) for a in fm.args))
    raise ValueError("embed needs a quantifier-free formula")


# --------------------------------------------------------------------------
# simplification

def _const_atom(a: Atom) -> Formula:
    if a.poly.is_constant():
        return TRUE if a.holds(a.poly.constant_value()) else FALSE
    return a


def _normalise_atom(a: Atom) -> Formula:
    # scale so the leading coefficient is +-1 with the sign folded into the relation
    if a.poly.is_zero():
        return _const_atom(a)
    lc = a.poly.leading_term()[1]
    p = a.poly.scale(1 / abs(lc))
    rel = a.rel
    if lc < 0:
        p = -p
        rel = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}[rel]
    return _const_atom(Atom(p, rel))


def negate(fm: Formula) -> Formula:
    """Negation pushed through connectives and quantifiers."""
    if isinstance(fm, Const):
        return FALSE if fm.value else TRUE
    if isinstance(fm, Atom):
        return atom(fm.poly, _NEGATE[fm.rel])
    if isinstance(fm, Not):
        return fm.arg
    if isinstance(fm, And):
        return Or(tuple(negate(a) for a in fm.args))
    if isinstance(fm, Or):
        return And(tuple(negate(a) for a in fm.args))
    if isinstance(fm, Forall):
        return Exists(fm.vars, negate(fm.body))
    if isinstance(fm, Exists):
        return Forall(fm.vars, negate(fm.body))
    raise TypeError(type(fm))


def simplify(fm: Formula) -> Formula:
    """Constant folding, flattening, duplicate removal and negation pushing.

    ``≠`` atoms come out as ``¬(=)``; any other negated atom is replaced by the
    complementary relation.
    """
    if isinstance(fm, Const):
        return fm
    if isinstance(fm, Atom):
        if fm.rel == "!=":
            inner = _normalise_atom(Atom(fm.poly, "="))
            return simplify(Not(inner)) if isinstance(inner, Const) else Not(inner)
        return _normalise_atom(fm)
    if isinstance(fm, Not):
        arg = fm.arg
        if isinstance(arg, Atom) and arg.rel in ("=",):
            inner = _normalise_atom(arg)
            if isinstance(inner, Const):
                return FALSE if inner.value else TRUE
            return Not(inner)
        if isinstance(arg, Not):
            return simplify(arg.arg)
        return simplify(negate(arg))
    if isinstance(fm, (And, Or)):
        is_and = isinstance(fm, And)
        absorbing, neutral = (FALSE, TRUE) if is_and else (TRUE, FALSE)
        out: list = []
        for a in fm.args:
            a = simplify(a)
            if a == absorbing:
                return absorbing
            if a == neutral:
                continue
            parts = a.args if isinstance(a, type(fm)) else (a,)
            for b in parts:
                if b not in out:
                    out.append(b)
        for b in out:
            if _complement(b) in out:
                return absorbing
        if not out:
            return neutral
        return out[0] if len(out) == 1 else type(fm)(tuple(out))
    if isinstance(fm, (Forall, Exists)):
        body = simplify(fm.body)
        if isinstance(body, Const):
            return body
        live = free_vars(body)
        vars_ = tuple(v for v in fm.vars if v in live)
        if not vars_:
            return body
        if isinstance(body, type(fm)):
            return type(fm)(vars_ + tuple(v for v in body.vars if v not in vars_), body.body)
        return type(fm)(vars_, body)
    raise TypeError(type(fm))


def _complement(fm: Formula):
    if isinstance(fm, Atom):
        return simplify(atom(fm.poly, _NEGATE[fm.rel]))
    if isinstance(fm, Not):
        return fm.arg
    return None


# --------------------------------------------------------------------------
# RLF formula builders

@dataclass(frozen=True)
class BallConstraint:
    """Punctured open ball ``0 < |x|^2 < r^2`` with a symbolic radius."""

    radius_symbol: str
    state_vars: tuple

    def norm2(self, ring: Sequence[str]) -> Polynomial:
        out = Polynomial.zero(ring)
        for v in self.state_vars:
            x = Polynomial.variable(ring, v)
            out = out + x * x
        return out

    def formula(self, ring: Sequence[str]) -> Formula:
        n2 = self.norm2(ring)
        r = Polynomial.variable(ring, self.radius_symbol)
        return And((Atom(n2, ">"), Atom(n2 - r * r, "<")))


class FormulaContext:
    """Shared ring and Lie chain for building the formulas of one (template, field) pair.

    The formula ring is ``params + (radius,) + state_vars``.
    """

    def __init__(self, p: Template | Polynomial, f: VectorField, radius: str = "r",
                 chain: LieChain | None = None):
        if isinstance(p, Polynomial):
            params = tuple(v for v in p.ring if v not in f.state_vars)
            p = Template(params, f.state_vars, p)
        if radius in p.params or radius in p.state_vars:
            raise ValueError(f"radius symbol {radius!r} clashes with template variables")
        self.template = p
        self.field = f
        self.radius = radius
        self.ring = union_ring(p.params, (radius,), f.state_vars)
        self.chain = chain if chain is not None else LieChain(p, f)
        self.ball = BallConstraint(radius, f.state_vars)

    def lie(self, k: int) -> Polynomial:
        return self.chain[k].embed(self.ring)

    def ball_formula(self) -> Formula:
        return self.ball.formula(self.ring)

    def radius_positive(self) -> Formula:
        return Atom(Polynomial.variable(self.ring, self.radius), ">")

    def over_ball(self, body: Formula) -> Formula:
        return Forall(self.field.state_vars, implies(self.ball_formula(), body))


def _ctx(p, f, radius="r", chain=None) -> FormulaContext:
    if isinstance(p, FormulaContext):
        return p
    return FormulaContext(p, f, radius, chain)


def build_psi(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """Vanishing of ``L^1 .. L^{i-1}``; ``true`` for ``i = 1``."""
    if i < 1:
        raise ValueError("i must be >= 1")
    c = _ctx(p, f, radius, chain)
    return conj(Atom(c.lie(j), "=") for j in range(1, i))


def build_varphi_block(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """Lower derivatives vanish and ``L^i < 0``."""
    c = _ctx(p, f, radius, chain)
    return conj([*(Atom(c.lie(j), "=") for j in range(1, i)), Atom(c.lie(i), "<")])


def build_varphi(p, f: VectorField, n: int, *, radius: str = "r", chain=None) -> Formula:
    """Pointwise transversality as a disjunction of ``n`` blocks."""
    if n < 1:
        raise ValueError("N must be >= 1")
    c = _ctx(p, f, radius, chain)
    return disj(build_varphi_block(c, f, i) for i in range(1, n + 1))


def build_phi1(p, f: VectorField, *, radius: str = "r", chain=None) -> Formula:
    c = _ctx(p, f, radius, chain)
    body = c.template.body.substitute({v: 0 for v in c.field.state_vars})
    return Atom(body.embed(c.ring), "=")


def build_phi2(p, f: VectorField, *, radius: str = "r", chain=None) -> Formula:
    c = _ctx(p, f, radius, chain)
    return c.over_ball(Atom(c.lie(0), ">"))


def build_phi3(p, f: VectorField, n: int, *, radius: str = "r", chain=None) -> Formula:
    c = _ctx(p, f, radius, chain)
    return c.over_ball(build_varphi(c, f, n))


def build_phi12(p, f: VectorField, *, radius: str = "r", chain=None) -> Formula:
    """``r > 0 ∧ φ¹ ∧ φ²``: the initial parameter/radius constraint."""
    c = _ctx(p, f, radius, chain)
    return And((c.radius_positive(), build_phi1(c, f), build_phi2(c, f)))


def build_phi(p, f: VectorField, n: int, *, radius: str = "r", chain=None) -> Formula:
    """``r > 0 ∧ φ¹ ∧ φ² ∧ φ³``; requires ``f(0) = 0``."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if not equilibrium_check(f):
        raise ValueError("the origin is not an equilibrium of the field")
    c = _ctx(p, f, radius, chain)
    return And((c.radius_positive(), build_phi1(c, f), build_phi2(c, f), build_phi3(c, f, n)))


def _guarded(c: FormulaContext, i: int, rel: str) -> Formula:
    if i < 1:
        raise ValueError("i must be >= 1")
    guard = c.ball_formula()
    psi = build_psi(c, c.field, i)
    if psi != TRUE:
        guard = And((*guard.args, *(psi.args if isinstance(psi, And) else (psi,))))
    return Forall(c.field.state_vars, implies(guard, Atom(c.lie(i), rel)))


def build_theta(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """``∀x. (ball ∧ ψ^i → L^i < 0)``."""
    return _guarded(_ctx(p, f, radius, chain), i, "<")


def build_theta_bar(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """``∀x. (ball ∧ ψ^i → L^i ≤ 0)``."""
    return _guarded(_ctx(p, f, radius, chain), i, "<=")


def build_phi_bar(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """``∀x. (ball → (φ-blocks 1..i) ∨ ψ^{i+1})``."""
    c = _ctx(p, f, radius, chain)
    blocks = [build_varphi_block(c, f, j) for j in range(1, i + 1)]
    return c.over_ball(disj([*blocks, build_psi(c, f, i + 1)]))


def build_phi_tilde(p, f: VectorField, i: int, *, radius: str = "r", chain=None) -> Formula:
    """``∀x. (ball → φ-blocks 1..i)``."""
    c = _ctx(p, f, radius, chain)
    return c.over_ball(disj(build_varphi_block(c, f, j) for j in range(1, i + 1)))


# --------------------------------------------------------------------------
# SMT-LIB2

def _smt_rational(c: Fraction) -> str:
    num = f"(- {-c.numerator})" if c.numerator < 0 else str(c.numerator)
    if c.denominator == 1:
        return num
    return f"(/ {num} {c.denominator})"


def smt_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for m, c in p.sorted_terms():
        factors = []
        for v, e in zip(p.ring, m):
            factors.extend([_smt_symbol(v)] * e)
        if not factors:
            terms.append(_smt_rational(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})")
        else:
            terms.append(f"(* {_smt_rational(c)} {' '.join(factors)})")
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def _smt_symbol(name: str) -> str:
    if name.replace("_", "a").isalnum() and not name[0].isdigit():
        return name
    return f"|{name}|"


def smt_formula(fm: Formula) -> str:
    if isinstance(fm, Const):
        return "true" if fm.value else "false"
    if isinstance(fm, Atom):
        lhs = smt_poly(fm.poly)
        if fm.rel == "!=":
            return f"(not (= {lhs} 0))"
        return f"({fm.rel} {lhs} 0)"
    if isinstance(fm, Not):
        return f"(not {smt_formula(fm.arg)})"
    if isinstance(fm, And):
        return "true" if not fm.args else f"(and {' '.join(smt_formula(a) for a in fm.args)})"
    if isinstance(fm, Or):
        return "false" if not fm.args else f"(or {' '.join(smt_formula(a) for a in fm.args)})"
    if isinstance(fm, (Forall, Exists)):
        q = "forall" if isinstance(fm, Forall) else "exists"
        decls = " ".join(f"({_smt_symbol(v)} Real)" for v in fm.vars)
        return f"({q} ({decls}) {smt_formula(fm.body)})"
    raise TypeError(type(fm))


def to_smtlib(fm: Formula, logic: str = "NRA", *, negate_goal: bool = False) -> str:
    """SMT-LIB2 script asserting ``fm`` (or its negation) followed by ``(check-sat)``.

    ``logic="NRA"`` keeps quantifiers.  ``logic="QF_NRA"`` requires the asserted
    formula to be existentially closed at the top; those variables become
    declared constants.
    """
    goal = negate(fm) if negate_goal else fm
    consts = sorted(free_vars(goal))
    if logic == "QF_NRA":
        goal = simplify(goal)
        while isinstance(goal, Exists):
            consts.extend(v for v in goal.vars if v not in consts)
            goal = goal.body
        if not is_quantifier_free(goal):
            raise ValueError("QF_NRA emission needs an existential prefix over a quantifier-free body")
    lines = [f"(set-logic {logic})"]
    lines += [f"(declare-fun {_smt_symbol(v)} () Real)" for v in consts]
    lines.append(f"(assert {smt_formula(goal)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
