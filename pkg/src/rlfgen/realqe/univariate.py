"""Univariate integer polynomials: Sturm sequences, real root isolation, algebraic numbers.

Polynomials are tuples of ``int`` coefficients in ascending degree order with
no trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

Coeffs = tuple


# --------------------------------------------------------------------------
# basic arithmetic

def trim(c: Iterable) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Coeffs) -> int:
    return len(p) - 1


def primitive(p: Sequence) -> tuple:
    """Integer multiple of ``p`` with content 1 and the same sign pattern.

    Accepts rational coefficients; scaling is always by a positive factor.
    """
    p = trim(p)
    if not p:
        return ()
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints)


def normalise(p: Sequence) -> tuple:
    """Primitive with a positive leading coefficient."""
    p = primitive(p)
    if p and p[-1] < 0:
        p = tuple(-c for c in p)
    return p


def derivative(p: Coeffs) -> tuple:
    return trim(i * c for i, c in enumerate(p) if i)


def pmul(p: Coeffs, q: Coeffs) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def divmod_q(p: Sequence, q: Sequence) -> tuple:
    """Quotient and remainder over the rationals (Fraction coefficients)."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    dq, lc = len(q) - 1, Fraction(q[-1])
    quo = [Fraction(0)] * max(len(r) - dq, 0)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] / lc
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return trim(quo), tuple(r)


def prem(p: Coeffs, q: Coeffs) -> tuple:
    """Remainder of ``p`` by ``q`` scaled to a primitive integer polynomial.

    The scaling factor is positive, so the sign pattern matches the true remainder.
    """
    return primitive(divmod_q(p, q)[1])


def pgcd(p: Coeffs, q: Coeffs) -> tuple:
    p, q = normalise(p), normalise(q)
    while q:
        p, q = q, normalise(divmod_q(p, q)[1])
    return p


def squarefree(p: Coeffs) -> tuple:
    p = normalise(p)
    if len(p) <= 2:
        return p
    g = pgcd(p, derivative(p))
    if len(g) <= 1:
        return p
    return normalise(divmod_q(p, g)[0])


# --------------------------------------------------------------------------
# evaluation

def eval_fraction(p: Coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at(p: Coeffs, x) -> int:
    """Exact sign of ``p(x)`` for rational ``x`` using integer arithmetic."""
    if not p:
        return 0
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    acc = 0
    dp = 1
    # p(n/d) * d^deg = sum c_i n^i d^(deg-i), Horner in n with powers of d
    for c in reversed(p):
        acc = acc * n + c * dp
        dp *= d
    return (acc > 0) - (acc < 0)


def sign_at_infinity(p: Coeffs, positive: bool) -> int:
    if not p:
        return 0
    s = 1 if p[-1] > 0 else -1
    if not positive and (len(p) - 1) % 2:
        s = -s
    return s


# --------------------------------------------------------------------------
# Sturm sequences

@lru_cache(maxsize=4096)
def sturm_sequence(p: Coeffs) -> tuple:
    """Canonical Sturm chain ``p, p', -rem(p, p'), ...`` with positive rescaling."""
    p = primitive(p)
    if not p:
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p]
    d = primitive(derivative(p))
    if not d:
        return tuple(seq)
    seq.append(d)
    while True:
        r = prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(tuple(-c for c in r))
    return tuple(seq)


def _variations(signs: Iterable[int]) -> int:
    last, count = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def variations_at(seq: Sequence[Coeffs], x) -> int:
    if x == float("inf"):
        return _variations(sign_at_infinity(q, True) for q in seq)
    if x == float("-inf"):
        return _variations(sign_at_infinity(q, False) for q in seq)
    return _variations(sign_at(q, x) for q in seq)


def count_roots(p: Coeffs, lo=float("-inf"), hi=float("inf")) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    seq = sturm_sequence(tuple(p))
    return variations_at(seq, lo) - variations_at(seq, hi)


def root_bound(p: Coeffs) -> Fraction:
    """Cauchy bound: every real root lies strictly inside ``(-B, B)``."""
    lc = abs(p[-1])
    return 1 + Fraction(max((abs(c) for c in p[:-1]), default=0), lc) + 1


# --------------------------------------------------------------------------
# isolation

def isolate_real_roots(p: Coeffs) -> list:
    """Disjoint isolating intervals for the distinct real roots of ``p``, ascending.

    Each entry is ``(lo, hi)``: either ``lo == hi`` (an exact rational root) or
    ``lo < hi`` with exactly one root in the open interval and ``p`` nonzero at
    both endpoints.
    """
    p = squarefree(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    B = root_bound(p)
    out: list = []
    stack = [(-B, B, variations_at(seq, -B), variations_at(seq, B))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if sign_at(p, mid) == 0:
            out.append((mid, mid))
            # shrink around the exact root so neighbours stay isolated
            eps = (hi - lo) / 4
            while True:
                a, b = mid - eps, mid + eps
                if sign_at(p, a) and sign_at(p, b) and count_roots(p, a, b) == 1:
                    break
                eps /= 2
            va, vb = variations_at(seq, a), variations_at(seq, b)
            stack.append((lo, a, vlo, va))
            stack.append((b, hi, vb, vhi))
            continue
        vm = variations_at(seq, mid)
        stack.append((lo, mid, vlo, vm))
        stack.append((mid, hi, vm, vhi))
    out.sort()
    return [_tighten(p, lo, hi) for lo, hi in out]


def _tighten(p: Coeffs, lo: Fraction, hi: Fraction) -> tuple:
    # endpoints of Sturm intervals may be roots only for exact entries
    if lo == hi:
        return lo, hi
    if sign_at(p, hi) == 0:
        return hi, hi
    return lo, hi


def refine(p: Coeffs, lo: Fraction, hi: Fraction) -> tuple:
    """One bisection step on an isolating interval of a squarefree ``p``."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    sm = sign_at(p, mid)
    if sm == 0:
        return mid, mid
    if sm == sign_at(p, lo):
        return mid, hi
    return lo, mid


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval ``(lo, hi)``."""
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    # Stern-Brocot descent, strict inequalities
    a, b, c, d = 0, 1, 1, 0
    while True:
        m = Fraction(a + c, b + d)
        if m <= lo:
            # jump right as far as possible
            k = _steps_right(a, b, c, d, lo)
            a, b = a + k * c, b + k * d
        elif m >= hi:
            k = _steps_left(a, b, c, d, hi)
            c, d = c + k * a, d + k * b
        else:
            return m


def _steps_right(a, b, c, d, lo):
    # largest k >= 1 with (a + k c)/(b + k d) <= lo
    if d == 0:
        return max(1, int((lo * b - a) // c))
    k = 1
    while Fraction(a + (k * 2) * c, b + (k * 2) * d) <= lo:
        k *= 2
    lo_k, hi_k = k, k * 2
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        if Fraction(a + mid * c, b + mid * d) <= lo:
            lo_k = mid
        else:
            hi_k = mid
    return lo_k


def _steps_left(a, b, c, d, hi):
    k = 1
    while Fraction(c + (k * 2) * a, d + (k * 2) * b) >= hi:
        k *= 2
    lo_k, hi_k = k, k * 2
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        if Fraction(c + mid * a, d + mid * b) >= hi:
            lo_k = mid
        else:
            hi_k = mid
    return lo_k


# --------------------------------------------------------------------------
# factorisation (delegated)

@lru_cache(maxsize=4096)
def irreducible_factors(p: Coeffs) -> tuple:
    """Distinct irreducible factors over the rationals, each normalised."""
    import sympy

    p = normalise(p)
    if len(p) <= 1:
        return ()
    if len(p) == 2:
        return (p,)
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(p)), t, domain="ZZ")
    _, facs = poly.factor_list()
    out = []
    for f, _ in facs:
        c = normalise(reversed([int(v) for v in f.all_coeffs()]))
        if len(c) > 1 and c not in out:
            out.append(c)
    return tuple(out)


# --------------------------------------------------------------------------
# algebraic numbers

class AlgebraicNumber:
    """A real root of an irreducible integer polynomial, held by an isolating interval.

    The interval is refined in place; the represented number never changes.
    Degree-one numbers should be converted to :class:`Fraction` with
    :func:`make_real`.
    """

    __slots__ = ("poly", "lo", "hi", "_float")

    def __init__(self, poly: Coeffs, lo: Fraction, hi: Fraction):
        self.poly = tuple(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._float = None
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def refine(self, steps: int = 1) -> None:
        for _ in range(steps):
            self.lo, self.hi = refine(self.poly, self.lo, self.hi)

    def refine_to(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self.refine()

    def interval(self) -> tuple:
        return self.lo, self.hi

    def __float__(self):
        if self._float is None:
            self.refine_to(Fraction(1, 2 ** 60))
            self._float = float((self.lo + self.hi) / 2)
        return self._float

    def same_as(self, other: "AlgebraicNumber") -> bool:
        if self.poly != other.poly:
            return False
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return False
        if lo == hi:
            return sign_at(self.poly, lo) == 0
        return count_roots(self.poly, lo, hi) == 1 or (
            sign_at(self.poly, lo) == 0 and self.lo <= lo <= self.hi)

    def __repr__(self):
        return f"AlgebraicNumber({list(self.poly)}, [{self.lo}, {self.hi}] ~ {float(self):.6g})"

    def __str__(self):
        return f"root{list(self.poly)}≈{float(self):.6g}"


def make_real(poly: Coeffs, lo: Fraction, hi: Fraction):
    """Fraction for linear or exactly located roots, otherwise :class:`AlgebraicNumber`."""
    if lo == hi:
        return Fraction(lo)
    if len(poly) == 2:
        return Fraction(-poly[0], poly[1])
    return AlgebraicNumber(poly, lo, hi)


def real_roots(p: Coeffs) -> list:
    """Distinct real roots of ``p`` in ascending order (Fraction or AlgebraicNumber)."""
    roots = []
    for f in irreducible_factors(tuple(p)):
        for lo, hi in isolate_real_roots(f):
            roots.append(make_real(f, lo, hi))
    return sort_reals(roots)


def bounds(v) -> tuple:
    if isinstance(v, AlgebraicNumber):
        return v.lo, v.hi
    return v, v


def compare(a, b) -> int:
    """Exact comparison of Fractions and AlgebraicNumbers."""
    if not isinstance(a, AlgebraicNumber) and not isinstance(b, AlgebraicNumber):
        return (a > b) - (a < b)
    if isinstance(a, AlgebraicNumber) and isinstance(b, AlgebraicNumber) and a.same_as(b):
        return 0
    if isinstance(b, AlgebraicNumber) and not isinstance(a, AlgebraicNumber):
        return -compare(b, a)
    if not isinstance(b, AlgebraicNumber):
        # a irrational (degree >= 2 irreducible) so a != b
        while a.lo <= b <= a.hi:
            a.refine()
        return 1 if a.lo > b else -1
    while True:
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        a.refine()
        b.refine()


def sort_reals(vals: list) -> list:
    from functools import cmp_to_key
    return sorted(vals, key=cmp_to_key(compare))


def separate(a, b) -> tuple:
    """Rational bounds ``u < w`` with ``a <= u`` and ``w <= b``-ish for ``a < b``.

    Returns ``(u, w)`` with ``a <= u < w <= b`` and every number strictly between
    ``a`` and ``b``'s isolating data lying in ``(u, w)``.
    """
    while True:
        alo, ahi = bounds(a)
        blo, bhi = bounds(b)
        if ahi < blo:
            return ahi, blo
        if isinstance(a, AlgebraicNumber):
            a.refine()
        if isinstance(b, AlgebraicNumber):
            b.refine()


def sample_between(a, b) -> Fraction:
    """Simple rational strictly between reals ``a < b``."""
    u, w = separate(a, b)
    if u == w:
        raise ValueError("values are not separated")
    return simplest_between(u, w)


def sample_below(a) -> Fraction:
    lo = bounds(a)[0]
    return Fraction(_floor(lo) - 1)


def sample_above(a) -> Fraction:
    hi = bounds(a)[1]
    return Fraction(_ceil(hi) + 1)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def to_fraction_interval(v) -> tuple:
    return bounds(v)


# --------------------------------------------------------------------------
# arithmetic in Q(alpha) = Q[t]/(m) for irreducible m

class NumberField:
    """Exact arithmetic in ``Q[t]/(m)``; elements are Fraction tuples of length < deg m."""

    def __init__(self, modulus: Coeffs):
        self.m = tuple(Fraction(c) for c in modulus)
        self.d = len(modulus) - 1

    def reduce(self, a: Sequence) -> tuple:
        a = trim(Fraction(c) for c in a)
        if len(a) <= self.d:
            return a
        return trim(divmod_q(a, self.m)[1])

    def add(self, a, b) -> tuple:
        n = max(len(a), len(b))
        return trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def sub(self, a, b) -> tuple:
        return self.add(a, tuple(-c for c in b))

    def mul(self, a, b) -> tuple:
        if not a or not b:
            return ()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, w in enumerate(b):
                    out[i + j] += u * w
        return self.reduce(out)

    def inv(self, a) -> tuple:
        # extended Euclid: s*a + t*m = 1
        r0, r1 = self.m, trim(a)
        s0, s1 = (), (Fraction(1),)
        while len(r1) > 1:
            q, r = divmod_q(r0, r1)
            r0, r1 = r1, trim(r)
            s0, s1 = s1, self._psub(s0, self._pmul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is not invertible")
        c = r1[0]
        return self.reduce(tuple(v / c for v in s1))

    @staticmethod
    def _pmul(a, b):
        if not a or not b:
            return ()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, w in enumerate(b):
                out[i + j] += u * w
        return trim(out)

    @staticmethod
    def _psub(a, b):
        n = max(len(a), len(b))
        return trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))

    # polynomials over the field: lists of elements, ascending in the main variable
    def ptrim(self, p) -> list:
        p = list(p)
        while p and not p[-1]:
            p.pop()
        return p

    def prem(self, a, b) -> list:
        a, b = self.ptrim(a), self.ptrim(b)
        inv_lc = self.inv(b[-1])
        while len(a) >= len(b) and a:
            c = self.mul(a[-1], inv_lc)
            k = len(a) - len(b)
            for i, bc in enumerate(b):
                a[i + k] = self.sub(a[i + k], self.mul(c, bc))
            a = self.ptrim(a)
        return a

    def pgcd(self, a, b) -> list:
        a, b = self.ptrim(a), self.ptrim(b)
        while b:
            a, b = b, self.prem(a, b)
        if not a:
            return a
        inv_lc = self.inv(a[-1])
        return [self.mul(c, inv_lc) for c in a]

    def peval(self, p, x: Fraction) -> tuple:
        acc: tuple = ()
        for c in reversed(p):
            acc = self.add(tuple(v * x for v in acc), c)
        return acc
