"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to
:class:`fractions.Fraction` coefficients, tied to an ordered tuple of
variable names (its *ring*).  Zero coefficients are never stored, so two
polynomials over the same ring are equal iff their term maps are equal.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...], one exponent per ring variable
Number = int | Fraction


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


class UnknownVariableError(KeyError):
    pass


class PolynomialLimitError(ValueError):
    """A polynomial exceeds the configured degree / variable guardrails."""


@dataclass(frozen=True)
class Limits:
    max_degree: int = 8
    max_vars: int = 6


DEFAULT_LIMITS = Limits()


def check_limits(p: "Polynomial", limits: Limits = DEFAULT_LIMITS) -> "Polynomial":
    if len(p.ring) > limits.max_vars:
        raise PolynomialLimitError(
            f"{len(p.ring)} variables exceeds limit {limits.max_vars}")
    if p.total_degree() > limits.max_degree:
        raise PolynomialLimitError(
            f"total degree {p.total_degree()} exceeds limit {limits.max_degree}")
    return p


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed")
    return Fraction(c)


# --------------------------------------------------------------------------
# monomial orders

@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex`` or ``grevlex`` over a variable priority.

    ``variables`` lists variable names from most to least significant;
    ``None`` means "the ring's own order".  Ring variables missing from the
    list rank below the listed ones, in ring order.
    """

    kind: str = "grevlex"
    variables: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, ring: Sequence[str]):
        """Return a sort-key function on monomials of ``ring`` (larger = bigger)."""
        return _order_key(self.kind, self.variables, tuple(ring))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


@functools.lru_cache(maxsize=256)
def _order_key(kind, variables, ring):
    if variables is None:
        perm = tuple(range(len(ring)))
    else:
        unknown = [v for v in variables if v not in ring]
        if unknown:
            raise UnknownVariableError(f"order variables {unknown} not in ring {ring}")
        first = [ring.index(v) for v in variables]
        perm = tuple(first + [i for i in range(len(ring)) if i not in first])
    if kind == "lex":
        return lambda m: tuple(m[i] for i in perm)
    rev = perm[::-1]
    return lambda m: (sum(m), tuple(-m[i] for i in rev))


# --------------------------------------------------------------------------

class Polynomial:
    """Sparse polynomial with rational coefficients.

    >>> x, y = Polynomial.variables(("x", "y"))
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
    """

    __slots__ = ("_ring", "_terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping | None = None):
        ring = tuple(ring)
        if len(set(ring)) != len(ring):
            raise ValueError(f"duplicate variable names in ring {ring}")
        n = len(ring)
        clean = {}
        for mon, c in (terms or {}).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != n:
                raise ValueError(f"monomial {mon} does not match ring arity {n}")
            if any(e < 0 for e in mon):
                raise ValueError(f"negative exponent in {mon}")
            c = _frac(c)
            if c:
                clean[mon] = clean.get(mon, 0) + c
                if not clean[mon]:
                    del clean[mon]
        self._ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: tuple, terms: dict) -> "Polynomial":
        # terms must already be canonical (Fraction coefficients, no zeros)
        p = object.__new__(cls)
        p._ring = ring
        p._terms = terms
        p._hash = None
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ring: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(ring), {})

    @classmethod
    def constant(cls, ring: Sequence[str], c: Number) -> "Polynomial":
        ring = tuple(ring)
        c = _frac(c)
        return cls._raw(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> "Polynomial":
        ring = tuple(ring)
        if name not in ring:
            raise UnknownVariableError(name)
        mon = tuple(1 if v == name else 0 for v in ring)
        return cls._raw(ring, {mon: Fraction(1)})

    @classmethod
    def variables(cls, ring: Sequence[str]) -> list["Polynomial"]:
        return [cls.variable(ring, v) for v in ring]

    # basic accessors -------------------------------------------------------
    @property
    def ring(self) -> tuple:
        return self._ring

    @property
    def terms(self) -> dict:
        """A copy of the term map."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * len(self._ring), Fraction(0))

    def coefficient(self, mon: Monomial) -> Fraction:
        return self._terms.get(tuple(mon), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def degree(self, var: str) -> int:
        i = self._index(var)
        return max((m[i] for m in self._terms), default=0)

    def support(self) -> tuple:
        """Variables that actually occur, in ring order."""
        used = [False] * len(self._ring)
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self._ring, used) if u)

    def _index(self, var: str) -> int:
        try:
            return self._ring.index(var)
        except ValueError:
            raise UnknownVariableError(f"variable {var!r} not in ring {self._ring}") from None

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._ring == other._ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._ring != self._ring:
                raise RingMismatchError(f"{self._ring} vs {other._ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._ring, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial._raw(self._ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial._raw(self._ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self._ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Number) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self._ring)
        return Polynomial._raw(self._ring, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mon: Monomial, c: Fraction) -> "Polynomial":
        if not c:
            return Polynomial.zero(self._ring)
        return Polynomial._raw(
            self._ring,
            {tuple(a + b for a, b in zip(m, mon)): v * c for m, v in self._terms.items()})

    # calculus / evaluation -------------------------------------------------
    def diff(self, var: str) -> "Polynomial":
        i = self._index(var)
        terms = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                terms[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._raw(self._ring, terms)

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        missing = [v for v in self.support() if v not in point]
        if missing:
            raise UnknownVariableError(f"unbound variables {missing}")
        vals = [_frac(point[v]) if v in point else Fraction(0) for v in self._ring]
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def substitute(self, bindings: Mapping[str, Number]) -> "Polynomial":
        """Bind some variables to rationals; the result keeps the same ring."""
        idx = []
        for v, val in bindings.items():
            idx.append((self._index(v), _frac(val)))
        if not idx:
            return self
        terms: dict = {}
        for m, c in self._terms.items():
            m = list(m)
            for i, val in idx:
                if m[i]:
                    c = c * val ** m[i]
                    m[i] = 0
            if c:
                m = tuple(m)
                s = terms.get(m, 0) + c
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial._raw(self._ring, terms)

    # ring changes ----------------------------------------------------------
    def embed(self, ring: Sequence[str]) -> "Polynomial":
        """Re-express over ``ring``, which must contain every occurring variable."""
        ring = tuple(ring)
        if ring == self._ring:
            return self
        missing = [v for v in self.support() if v not in ring]
        if missing:
            raise RingMismatchError(f"variables {missing} not in target ring {ring}")
        pos = [ring.index(v) if v in ring else None for v in self._ring]
        n = len(ring)
        terms = {}
        for m, c in self._terms.items():
            new = [0] * n
            for j, e in zip(pos, m):
                if e:
                    new[j] = e
            terms[tuple(new)] = c
        return Polynomial._raw(ring, terms)

    def drop_to(self, ring: Sequence[str]) -> "Polynomial":
        return self.embed(ring)

    # orders ----------------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        key = order.key(self._ring)
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key(self._ring)
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_term(order)[1])

    # rendering -------------------------------------------------------------
    def render(self, order: MonomialOrder = GREVLEX) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms(order)):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self._ring, m) if e)
            a = abs(c)
            coef = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if not mono:
                body = coef
            elif a == 1:
                body = mono
            else:
                body = f"{coef}*{mono}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Polynomial({self.render()!r}, ring={self._ring})"


# --------------------------------------------------------------------------
# module-level operations

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def evaluate(p: Polynomial, point: Mapping[str, Number]) -> Fraction:
    return p.evaluate(point)


def substitute(p: Polynomial, bindings: Mapping[str, Number]) -> Polynomial:
    return p.substitute(bindings)


def union_ring(*rings: Iterable[str]) -> tuple:
    out: list = []
    for r in rings:
        for v in r:
            if v not in out:
                out.append(v)
    return tuple(out)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce(p: Polynomial, divisors: Sequence[Polynomial],
           order: MonomialOrder = GREVLEX, *, check: bool = True):
    """Multivariate division of ``p`` by ``divisors``.

    Returns ``(quotients, remainder)`` with ``p == sum(q*d) + remainder`` and no
    remainder term divisible by a divisor's leading monomial.  With
    ``check=True`` the identity is re-verified exactly before returning.
    """
    if not divisors:
        raise ValueError("reduce needs at least one divisor")
    ring = p.ring
    for d in divisors:
        if d.ring != ring:
            raise RingMismatchError(f"{d.ring} vs {ring}")
    key = order.key(ring)
    heads = [d.leading_term(order) if d else None for d in divisors]
    quotients = [dict() for _ in divisors]
    rem: dict = {}
    work = dict(p._terms)
    while work:
        m = max(work, key=key)
        c = work[m]
        for i, h in enumerate(heads):
            if h is not None and _divides(h[0], m):
                qm = tuple(a - b for a, b in zip(m, h[0]))
                qc = c / h[1]
                quotients[i][qm] = quotients[i].get(qm, 0) + qc
                for dm, dc in divisors[i]._terms.items():
                    t = tuple(a + b for a, b in zip(dm, qm))
                    s = work.get(t, 0) - qc * dc
                    if s:
                        work[t] = s
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    qs = [Polynomial(ring, q) for q in quotients]
    r = Polynomial._raw(ring, rem)
    if check:
        total = r
        for q, d in zip(qs, divisors):
            total = total + q * d
        if total != p:
            raise AssertionError("division identity failed")  # pragma: no cover
    return qs, r
