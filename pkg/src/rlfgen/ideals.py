"""Groebner bases (Buchberger), ideal membership and the Lie-chain fixed point."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .dynamics import LieChain, Template, VectorField
from .polyring import (GREVLEX, MonomialOrder, Polynomial, RingMismatchError,
                       reduce as divide)


class ResourceLimitError(RuntimeError):
    """Base class for guardrail violations during ideal computations."""


class BasisSizeExceeded(ResourceLimitError):
    pass


class DegreeExceeded(ResourceLimitError):
    pass


class ChainLengthExceeded(ResourceLimitError):
    pass


@dataclass(frozen=True)
class GroebnerLimits:
    max_basis: int = 400
    max_degree: int = 40
    max_pairs: int = 50_000


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Elt:
    """Basis element under construction: polynomial + cofactors w.r.t. the generators."""

    __slots__ = ("poly", "lm", "lc", "cof")

    def __init__(self, poly: Polynomial, cof: list | None, order):
        self.poly = poly
        self.lm, self.lc = poly.leading_term(order)
        self.cof = cof


def _reduce_tracked(p: Polynomial, cof, basis: list, order: MonomialOrder, key):
    """Full reduction of ``p`` by ``basis`` while updating generator cofactors."""
    ring = p.ring
    work = dict(p.items())
    rem: dict = {}
    cof = list(cof) if cof is not None else None
    while work:
        m = max(work, key=key)
        c = work[m]
        for b in basis:
            if _divides(b.lm, m):
                qm = tuple(x - y for x, y in zip(m, b.lm))
                qc = c / b.lc
                for dm, dc in b.poly.items():
                    t = tuple(x + y for x, y in zip(dm, qm))
                    s = work.get(t, 0) - qc * dc
                    if s:
                        work[t] = s
                    else:
                        work.pop(t, None)
                if cof is not None:
                    for j, bc in enumerate(b.cof):
                        if bc:
                            cof[j] = cof[j] - bc.mul_term(qm, qc)
                break
        else:
            rem[m] = c
            del work[m]
    return Polynomial(ring, rem), cof


@dataclass
class IdealBasis:
    """Generators of an ideal plus (once computed) its reduced Groebner basis.

    ``cofactors[i][j]`` expresses ``groebner[i] = sum_j cofactors[i][j] * generators[j]``.
    """

    generators: tuple
    order: MonomialOrder = GREVLEX
    groebner: tuple | None = None
    cofactors: tuple | None = None
    stats: dict = field(default_factory=dict)

    @property
    def ring(self) -> tuple | None:
        return self.generators[0].ring if self.generators else None

    def is_zero_ideal(self) -> bool:
        return self.groebner is not None and not self.groebner

    def verify(self) -> bool:
        """Re-check every structural claim about the stored basis."""
        if self.groebner is None:
            return False
        order = self.order
        G = list(self.groebner)
        for g in G:
            if not g or g.leading_term(order)[1] != 1:
                return False
        lms = [g.leading_monomial(order) for g in G]
        for i, j in itertools.permutations(range(len(G)), 2):
            if _divides(lms[i], lms[j]):
                return False
        # reduced: no term of any element divisible by another's leading monomial
        for i, g in enumerate(G):
            for m, _ in g.items():
                if any(_divides(lms[j], m) for j in range(len(G)) if j != i):
                    return False
        for gen in self.generators:
            if gen and (not G or divide(gen, G, order, check=False)[1]):
                return False
        if not buchberger_criterion(G, order):
            return False
        if self.cofactors is not None:
            for g, cof in zip(G, self.cofactors):
                total = Polynomial.zero(g.ring)
                for c, gen in zip(cof, self.generators):
                    total = total + c * gen
                if total != g:
                    return False
        return True


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    l = _lcm(mf, mg)
    return (f.mul_term(tuple(a - b for a, b in zip(l, mf)), 1 / cf)
            - g.mul_term(tuple(a - b for a, b in zip(l, mg)), 1 / cg))


def buchberger_criterion(G: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """True iff every pairwise S-polynomial reduces to zero modulo ``G``."""
    for f, g in itertools.combinations(G, 2):
        if divide(s_polynomial(f, g, order), list(G), order, check=False)[1]:
            return False
    return True


def groebner_basis(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX, *,
                   limits: GroebnerLimits = GroebnerLimits(),
                   track_cofactors: bool = True) -> IdealBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are taken lowest lcm-degree first; pairs with coprime leading
    monomials and pairs covered by the chain criterion are skipped.
    """
    gens = tuple(gens)
    if gens:
        ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError(f"{g.ring} vs {ring}")
    ring = gens[0].ring if gens else ()
    key = order.key(ring)
    zero = Polynomial.zero(ring)
    ngen = len(gens)

    basis: list[_Elt] = []
    pairs: set = set()
    stats = {"pairs_considered": 0, "pairs_skipped": 0, "reductions_to_zero": 0}

    def add(poly: Polynomial, cof):
        lc = poly.leading_term(order)[1]
        poly = poly.scale(1 / lc)
        if cof is not None:
            cof = [c.scale(1 / lc) for c in cof]
        if poly.total_degree() > limits.max_degree:
            raise DegreeExceeded(f"basis element of degree {poly.total_degree()}")
        basis.append(_Elt(poly, cof, order))
        if len(basis) > limits.max_basis:
            raise BasisSizeExceeded(f"more than {limits.max_basis} basis elements")
        k = len(basis) - 1
        for i in range(k):
            pairs.add((i, k))

    for j, g in enumerate(gens):
        if not g:
            continue
        cof = None
        if track_cofactors:
            cof = [zero] * ngen
            cof[j] = Polynomial.constant(ring, 1)
        r, cof = _reduce_tracked(g, cof, basis, order, key)
        if r:
            add(r, cof)

    def pair_key(p):
        i, j = p
        l = _lcm(basis[i].lm, basis[j].lm)
        return (sum(l), key(l), i, j)

    done = 0
    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        done += 1
        stats["pairs_considered"] += 1
        if done > limits.max_pairs:
            raise ResourceLimitError(f"more than {limits.max_pairs} critical pairs")
        bi, bj = basis[i], basis[j]
        l = _lcm(bi.lm, bj.lm)
        if all(a == 0 or b == 0 for a, b in zip(bi.lm, bj.lm)):
            stats["pairs_skipped"] += 1
            continue
        if any(k != i and k != j and _divides(basis[k].lm, l)
               and (min(i, k), max(i, k)) not in pairs
               and (min(j, k), max(j, k)) not in pairs
               for k in range(len(basis))):
            stats["pairs_skipped"] += 1
            continue
        mi = tuple(a - b for a, b in zip(l, bi.lm))
        mj = tuple(a - b for a, b in zip(l, bj.lm))
        s = bi.poly.mul_term(mi, 1 / bi.lc) - bj.poly.mul_term(mj, 1 / bj.lc)
        cof = None
        if track_cofactors:
            cof = [a.mul_term(mi, 1 / bi.lc) - b.mul_term(mj, 1 / bj.lc)
                   for a, b in zip(bi.cof, bj.cof)]
        r, cof = _reduce_tracked(s, cof, basis, order, key)
        if r:
            add(r, cof)
        else:
            stats["reductions_to_zero"] += 1

    # minimalise, then inter-reduce
    keep = []
    for idx, b in sorted(enumerate(basis), key=lambda t: key(t[1].lm)):
        if not any(_divides(basis[k].lm, b.lm) for k in keep):
            keep.append(idx)
    minimal = [basis[k] for k in keep]
    reduced = []
    for idx, b in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r, cof = _reduce_tracked(b.poly, b.cof, others, order, key)
        lc = r.leading_term(order)[1]
        reduced.append(_Elt(r.scale(1 / lc),
                            [c.scale(1 / lc) for c in cof] if cof is not None else None,
                            order))
    reduced.sort(key=lambda b: key(b.lm), reverse=True)
    stats["basis_size"] = len(reduced)
    return IdealBasis(
        generators=gens, order=order,
        groebner=tuple(b.poly for b in reduced),
        cofactors=tuple(tuple(b.cof) for b in reduced) if track_cofactors else None,
        stats=stats)


def _ensure_basis(basis: IdealBasis) -> IdealBasis:
    if basis.groebner is None:
        return groebner_basis(basis.generators, basis.order)
    return basis


def member(p: Polynomial, basis: IdealBasis | Sequence[Polynomial]) -> bool:
    if not isinstance(basis, IdealBasis):
        basis = groebner_basis(list(basis))
    basis = _ensure_basis(basis)
    if not p:
        return True
    if not basis.groebner:
        return False
    if basis.ring != p.ring:
        raise RingMismatchError(f"{p.ring} vs {basis.ring}")
    return not divide(p, list(basis.groebner), basis.order, check=False)[1]


def membership_cofactors(p: Polynomial, basis: IdealBasis) -> list | None:
    """Cofactors ``h`` with ``p == sum h_j * generators[j]``, or ``None`` if ``p`` is not a member."""
    basis = _ensure_basis(basis)
    ring = p.ring
    zero = Polynomial.zero(ring)
    if not p:
        return [zero] * len(basis.generators)
    if not basis.groebner:
        return None
    if basis.cofactors is None:
        basis = groebner_basis(basis.generators, basis.order)
    qs, r = divide(p, list(basis.groebner), basis.order)
    if r:
        return None
    out = [zero] * len(basis.generators)
    for q, cof in zip(qs, basis.cofactors):
        for j, c in enumerate(cof):
            if c and q:
                out[j] = out[j] + q * c
    return out


@dataclass
class ChainReport:
    """Diagnostics of the ascending chain ``<L^1> ⊆ <L^1, L^2> ⊆ ...``."""

    bound: int
    lie: list
    basis_sizes: list
    memberships: list  # (i, L^{i+1} in I_i)

    def as_dict(self) -> dict:
        return {
            "chain_bound": self.bound,
            "basis_sizes": list(self.basis_sizes),
            "memberships": [{"i": i, "member": m} for i, m in self.memberships],
            "lie": [str(p) for p in self.lie],
        }


def default_order(p: Template | Polynomial) -> MonomialOrder:
    """grevlex with template parameters ranked first."""
    if isinstance(p, Template):
        return MonomialOrder("grevlex", p.params + p.state_vars)
    return GREVLEX


def chain_report(p: Template | Polynomial, f: VectorField, *,
                 order: MonomialOrder | None = None,
                 max_chain: int = 16,
                 limits: GroebnerLimits = GroebnerLimits(),
                 chain: LieChain | None = None) -> ChainReport:
    """Iterate the ideal chain until ``L^{i+1}`` joins ``<L^1..L^i>``."""
    order = order or default_order(p)
    chain = chain if chain is not None else LieChain(p, f)
    sizes, log = [], []
    for i in range(1, max_chain + 1):
        basis = groebner_basis(chain.upto(i), order, limits=limits, track_cofactors=False)
        sizes.append(len(basis.groebner))
        inside = member(chain[i + 1], basis)
        log.append((i, inside))
        if inside:
            return ChainReport(i, [chain[k] for k in range(0, i + 2)], sizes, log)
    raise ChainLengthExceeded(f"ideal chain did not stabilise within {max_chain} steps")


def chain_bound(p: Template | Polynomial, f: VectorField, **kw) -> int:
    """Least ``i >= 1`` with ``L^{i+1} p`` in ``<L^1 p, ..., L^i p>``."""
    return chain_report(p, f, **kw).bound


def chain_ideal(chain: LieChain, i: int, order: MonomialOrder,
                limits: GroebnerLimits = GroebnerLimits()) -> IdealBasis:
    """Groebner basis of ``<L^1, ..., L^i>``."""
    return groebner_basis(chain.upto(i), order, limits=limits, track_cofactors=False)

