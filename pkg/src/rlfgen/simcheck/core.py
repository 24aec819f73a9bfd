"""Numerical integration of polynomial fields and empirical certificate checks.

Everything here runs in floats and shares no evaluation code with the exact
layers, so it can serve as an independent oracle.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..dynamics import LieChain, VectorField, in_transverse_set, lie_derivative
from ..ideals import chain_bound
from ..polyring import Polynomial
from .kernels import KERNELS

DIVERGENCE_BOUND = 1e6


def pack(polys: Sequence[Polynomial], variables: Sequence[str]) -> tuple:
    """Exponent rows, float coefficients and owning slot for a list of polynomials."""
    variables = tuple(variables)
    exps, coeffs, owner = [], [], []
    for slot, p in enumerate(polys):
        p = p.embed(variables)
        for m, c in p.items():
            exps.append(m)
            coeffs.append(float(c))
            owner.append(slot)
    n = len(variables)
    if not exps:
        # a zero field still needs a well-shaped table
        exps, coeffs, owner = [(0,) * n], [0.0], [0]
    return (np.asarray(exps, dtype=np.int64).reshape(-1, n), np.asarray(coeffs, dtype=np.float64),
            np.asarray(owner, dtype=np.int64))


class FloatPoly:
    """A polynomial compiled for float evaluation over a fixed variable order."""

    def __init__(self, p: Polynomial, variables: Sequence[str], kernels=None):
        self.kernels = kernels or KERNELS
        self.exps, self.coeffs, _ = pack([p], variables)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(self.kernels.eval_rows(self.exps, self.coeffs, x[None, :])[0])

    def along(self, states) -> np.ndarray:
        return self.kernels.eval_rows(self.exps, self.coeffs, np.asarray(states, dtype=np.float64))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    h: float
    method: str = "rk4"
    diverged: bool = False

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, fh=None) -> str | None:
        """Header ``t,x1,...,xn`` and one row per step; returns the text if no handle is given."""
        own = fh is None
        fh = io.StringIO() if own else fh
        w = csv.writer(fh, lineterminator="\n")
        n = self.states.shape[1]
        w.writerow(["t"] + [f"x{j + 1}" for j in range(n)])
        for t, s in zip(self.times, self.states):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in s])
        return fh.getvalue() if own else None


def simulate(f: VectorField, x0, h: float, T: float, *, bound: float = DIVERGENCE_BOUND,
             kernels=None) -> Trajectory:
    """Fixed-step classical RK4 on ``[0, T]``, truncated if ``|x|`` exceeds ``bound``."""
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (f.dim,):
        raise ValueError(f"start point needs {f.dim} coordinates")
    if not np.all(np.isfinite(x0)) or not math.isfinite(h) or not math.isfinite(T):
        raise ValueError("non-finite input")
    if h <= 0 or T < h * (1 - 1e-12):
        raise ValueError("need h > 0 and T >= h")
    k = kernels or KERNELS
    steps = max(1, int(round(T / h)))
    exps, coeffs, owner = pack(f.components, f.state_vars)
    states, done = k.rk4(exps, coeffs, owner, x0, float(h), steps, float(bound))
    states = states[: done + 1]
    times = h * np.arange(done + 1)
    return Trajectory(times, states, float(h), "rk4", diverged=done < steps)


def lie_vs_fd(p: Polynomial, f: VectorField, x0, h: float) -> float:
    """Gap between a forward difference of ``p`` over one RK4 step and ``L^1 p(x0)``."""
    x0 = np.asarray(x0, dtype=np.float64)
    traj = simulate(f, x0, h, h)
    V = FloatPoly(p.embed(f.state_vars), f.state_vars)
    L1 = FloatPoly(lie_derivative(p.embed(f.state_vars), f), f.state_vars)
    return abs((V(traj.final) - V(x0)) / h - L1(x0))


# --------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationConfig:
    starts: int = 20
    h: float = 1e-3
    T: float = 20.0
    threshold: float = 1e-3
    monotone_tol: float = 1e-9
    fd_points: int = 100
    fd_h: float = 1e-5
    transverse_samples: int = 100
    seed: int = 0


@dataclass
class ValidationReport:
    thresholds: dict
    final_norms: list = field(default_factory=list)
    converged: list = field(default_factory=list)
    max_increase: list = field(default_factory=list)
    monotone: list = field(default_factory=list)
    fd_max_rel_error: float | None = None
    transverse_agree: int = 0
    transverse_total: int = 0

    @property
    def all_converged(self) -> bool:
        return all(self.converged)

    @property
    def all_monotone(self) -> bool:
        return all(self.monotone)

    @property
    def ok(self) -> bool:
        return (self.all_converged and self.all_monotone
                and self.transverse_agree == self.transverse_total)

    def as_dict(self) -> dict:
        return {
            "thresholds": self.thresholds,
            "final_norms": self.final_norms,
            "converged": self.converged,
            "max_increase": self.max_increase,
            "monotone": self.monotone,
            "fd_max_rel_error": self.fd_max_rel_error,
            "transverse": {"agree": self.transverse_agree, "total": self.transverse_total},
        }


def ball_starts(n: int, radius: float, count: int, seed: int) -> np.ndarray:
    """Uniform random points in the open ball of the given radius."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    rad = radius * rng.uniform(size=count) ** (1.0 / n)
    return d * rad[:, None]


def _numeric_transverse(chain: LieChain, f: VectorField, x, bound: int, tol: float = 1e-12) -> bool:
    for k in range(1, bound + 1):
        v = FloatPoly(chain[k], f.state_vars)(x)
        if abs(v) > tol:
            return v < 0
    return False


def validate_rlf(cert, f: VectorField, config: ValidationConfig = ValidationConfig()) -> ValidationReport:
    """Simulate from random starts in half the certified ball and audit the certificate."""
    report = ValidationReport(thresholds={
        "threshold": config.threshold, "monotone_tol": config.monotone_tol,
        "h": config.h, "T": config.T, "fd_h": config.fd_h,
    })
    p = cert.polynomial.embed(f.state_vars)
    V = FloatPoly(p, f.state_vars)
    r0 = float(cert.radius)
    if config.T > 0 and config.starts > 0:
        for x0 in ball_starts(f.dim, r0 / 2, config.starts, config.seed):
            tr = simulate(f, x0, config.h, config.T)
            norm = float(np.linalg.norm(tr.final))
            report.final_norms.append(norm)
            report.converged.append(not tr.diverged and norm < config.threshold)
            vals = V.along(tr.states)
            inc = float(np.max(np.diff(vals))) if len(vals) > 1 else 0.0
            report.max_increase.append(inc)
            report.monotone.append(inc <= config.monotone_tol)
    if config.fd_points > 0:
        L1 = FloatPoly(lie_derivative(p, f), f.state_vars)
        worst = 0.0
        for x0 in ball_starts(f.dim, r0, config.fd_points, config.seed + 1):
            gap = lie_vs_fd(p, f, x0, config.fd_h)
            worst = max(worst, gap / max(1.0, abs(L1(x0))))
        report.fd_max_rel_error = worst
    if config.transverse_samples > 0:
        bound = max(cert.iteration, chain_bound(p, f))
        chain = LieChain(p, f)
        rng = np.random.default_rng(config.seed + 2)
        r2 = Fraction(cert.radius) ** 2
        while report.transverse_total < config.transverse_samples:
            pt = tuple(Fraction(int(k), 64) * Fraction(cert.radius) for k in rng.integers(-64, 65, size=f.dim))
            if not 0 < sum(v * v for v in pt) < r2:
                continue
            exact = in_transverse_set(p, f, pt, bound, chain)
            approx = _numeric_transverse(chain, f, np.array([float(v) for v in pt]), bound)
            report.transverse_total += 1
            report.transverse_agree += exact == approx
    return report
