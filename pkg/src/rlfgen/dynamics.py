"""Polynomial vector fields, Lie derivatives, pointwise rank and transversality."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .polyring import Polynomial, union_ring


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class VectorField:
    """Right-hand side ``f`` of ``dx/dt = f(x)``, one component per state variable."""

    state_vars: tuple
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "state_vars", tuple(self.state_vars))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != len(self.state_vars):
            raise FieldError(
                f"{len(self.components)} components for {len(self.state_vars)} state variables")
        for c in self.components:
            if c.ring != self.state_vars:
                raise FieldError(f"component ring {c.ring} != state variables {self.state_vars}")

    @classmethod
    def from_polys(cls, state_vars: Sequence[str], comps: Sequence[Polynomial]) -> "VectorField":
        state_vars = tuple(state_vars)
        return cls(state_vars, tuple(c.embed(state_vars) for c in comps))

    @property
    def dim(self) -> int:
        return len(self.state_vars)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class Template:
    """Parametric polynomial ``p(u, x)``; ``body`` lives over ``params + state_vars``."""

    params: tuple
    state_vars: tuple
    body: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "state_vars", tuple(self.state_vars))
        clash = set(self.params) & set(self.state_vars)
        if clash:
            raise FieldError(f"parameters and state variables overlap: {sorted(clash)}")
        ring = self.params + self.state_vars
        if self.body.ring != ring:
            object.__setattr__(self, "body", self.body.embed(ring))

    @property
    def ring(self) -> tuple:
        return self.params + self.state_vars

    def instantiate(self, values: Mapping[str, Fraction]) -> Polynomial:
        """Substitute every parameter and drop to the state ring."""
        missing = [u for u in self.params if u not in values]
        if missing:
            raise FieldError(f"missing parameter values {missing}")
        return self.body.substitute({u: values[u] for u in self.params}).embed(self.state_vars)

    def __str__(self):
        return str(self.body)


@dataclass(frozen=True)
class Rank:
    """Pointwise rank: a positive integer, or infinite (``value is None``)."""

    value: int | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self):
        return "∞" if self.value is None else str(self.value)


INFINITE = Rank(None)


def _prepare(p: Polynomial, f: VectorField):
    if not set(f.state_vars) <= set(p.ring):
        p = p.embed(union_ring(p.ring, f.state_vars))
    return p, tuple(c.embed(p.ring) for c in f.components)


def _lie_once(p: Polynomial, f: VectorField, comps) -> Polynomial:
    out = Polynomial.zero(p.ring)
    for v, fc in zip(f.state_vars, comps):
        d = p.diff(v)
        if d:
            out = out + d * fc
    return out


def lie_derivative(p: Polynomial, f: VectorField, k: int = 1) -> Polynomial:
    """k-th Lie derivative of ``p`` along ``f``.

    Variables of ``p`` that are not state variables (template parameters) are
    treated as constants.  ``k = 0`` returns ``p``.
    """
    if k < 0:
        raise ValueError("order must be non-negative")
    p, comps = _prepare(p, f)
    for _ in range(k):
        p = _lie_once(p, f, comps)
    return p


class LieChain:
    """Memoised chain ``L^0 p, L^1 p, ...`` for one (polynomial, field) pair.

    The cache is owned by the caller; a single instance is not safe for
    concurrent mutation without external locking.
    """

    def __init__(self, p: Polynomial | Template, f: VectorField):
        body = p.body if isinstance(p, Template) else p
        body, self._comps = _prepare(body, f)
        self.field = f
        self._chain = [body]

    @property
    def ring(self) -> tuple:
        return self._chain[0].ring

    def __getitem__(self, k: int) -> Polynomial:
        if k < 0:
            raise IndexError(k)
        while len(self._chain) <= k:
            self._chain.append(_lie_once(self._chain[-1], self.field, self._comps))
        return self._chain[k]

    def upto(self, k: int) -> list:
        """``[L^1, ..., L^k]``."""
        return [self[i] for i in range(1, k + 1)]

    def __len__(self):
        return len(self._chain)


def _check_point(p: Polynomial, f: VectorField, x0: Mapping | Sequence):
    if not isinstance(x0, Mapping):
        if len(x0) != f.dim:
            raise FieldError("point dimension does not match the field")
        x0 = dict(zip(f.state_vars, x0))
    extra = [v for v in p.support() if v not in f.state_vars]
    if extra:
        raise FieldError(f"pointwise operations need an instantiated polynomial; free {extra}")
    return {v: Fraction(x0[v]) for v in f.state_vars}


def pointwise_rank(p: Polynomial, f: VectorField, x0, bound: int,
                   chain: LieChain | None = None) -> Rank:
    """Smallest ``k <= bound`` with ``L^k p(x0) != 0``, else :data:`INFINITE`.

    ``bound`` must be at least the chain bound of ``p``; beyond it every Lie
    derivative vanishes wherever the first ``bound`` do.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    pt = _check_point(p, f, x0)
    chain = chain or LieChain(p, f)
    for k in range(1, bound + 1):
        if chain[k].evaluate(pt) != 0:
            return Rank(k)
    return INFINITE


def in_transverse_set(p: Polynomial, f: VectorField, x0, bound: int,
                      chain: LieChain | None = None) -> bool:
    chain = chain or LieChain(p, f)
    rank = pointwise_rank(p, f, x0, bound, chain)
    if rank.is_infinite:
        return False
    pt = _check_point(p, f, x0)
    return chain[rank.value].evaluate(pt) < 0


def equilibrium_check(f: VectorField) -> bool:
    """True iff the origin is an equilibrium of ``f``."""
    origin = {v: 0 for v in f.state_vars}
    return all(c.evaluate(origin) == 0 for c in f.components)
