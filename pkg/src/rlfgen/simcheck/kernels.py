"""Float kernels for polynomial evaluation and fixed-step RK4.

Polynomials arrive packed as ``(exps, coeffs, owner)``: one row of exponents
per term, its float coefficient, and the output slot it contributes to.  The
numba kernels are used when numba imports and ``RLFGEN_KERNELS`` is not
``numpy``; the numpy versions compute the same values.
"""

from __future__ import annotations

import os

import numpy as np

KERNELS_ENV = "RLFGEN_KERNELS"


# --------------------------------------------------------------------------
# numpy reference

def _np_eval(exps, coeffs, owner, nout, x):
    terms = coeffs * np.prod(np.power(x[None, :], exps), axis=1)
    out = np.zeros(nout)
    np.add.at(out, owner, terms)
    return out


def _np_rk4(exps, coeffs, owner, x0, h, steps, bound):
    n = x0.shape[0]
    states = np.empty((steps + 1, n))
    states[0] = x0
    x = x0.copy()
    for k in range(steps):
        k1 = _np_eval(exps, coeffs, owner, n, x)
        k2 = _np_eval(exps, coeffs, owner, n, x + 0.5 * h * k1)
        k3 = _np_eval(exps, coeffs, owner, n, x + 0.5 * h * k2)
        k4 = _np_eval(exps, coeffs, owner, n, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[k + 1] = x
        if not np.all(np.isfinite(x)) or np.sqrt(np.dot(x, x)) > bound:
            return states, k + 1
    return states, steps


def _np_eval_rows(exps, coeffs, xs):
    # one scalar polynomial over many points
    pw = np.power(xs[:, None, :], exps[None, :, :])
    return np.prod(pw, axis=2) @ coeffs


class _Numpy:
    name = "numpy"
    eval_poly = staticmethod(_np_eval)
    rk4 = staticmethod(_np_rk4)
    eval_rows = staticmethod(_np_eval_rows)


# --------------------------------------------------------------------------
# numba

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def eval_poly(exps, coeffs, owner, nout, x):
        # power table, then one product per term
        m, n = exps.shape
        top = 0
        for i in range(m):
            for j in range(n):
                if exps[i, j] > top:
                    top = exps[i, j]
        pw = np.ones((n, top + 1))
        for j in range(n):
            for e in range(1, top + 1):
                pw[j, e] = pw[j, e - 1] * x[j]
        out = np.zeros(nout)
        for i in range(m):
            t = coeffs[i]
            for j in range(n):
                t *= pw[j, exps[i, j]]
            out[owner[i]] += t
        return out

    @njit(cache=True)
    def rk4(exps, coeffs, owner, x0, h, steps, bound):
        n = x0.shape[0]
        states = np.empty((steps + 1, n))
        states[0] = x0
        x = x0.copy()
        for k in range(steps):
            k1 = eval_poly(exps, coeffs, owner, n, x)
            k2 = eval_poly(exps, coeffs, owner, n, x + 0.5 * h * k1)
            k3 = eval_poly(exps, coeffs, owner, n, x + 0.5 * h * k2)
            k4 = eval_poly(exps, coeffs, owner, n, x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            states[k + 1] = x
            s = 0.0
            finite = True
            for j in range(n):
                if not np.isfinite(x[j]):
                    finite = False
                s += x[j] * x[j]
            if not finite or np.sqrt(s) > bound:
                return states, k + 1
        return states, steps

    @njit(cache=True)
    def eval_rows(exps, coeffs, xs):
        rows = xs.shape[0]
        out = np.empty(rows)
        owner = np.zeros(exps.shape[0], dtype=np.int64)
        for r in range(rows):
            out[r] = eval_poly(exps, coeffs, owner, 1, xs[r])[0]
        return out

    class _Numba:
        name = "numba"

    _Numba.eval_poly = staticmethod(eval_poly)
    _Numba.rk4 = staticmethod(rk4)
    _Numba.eval_rows = staticmethod(eval_rows)
    return _Numba


def numpy_kernels():
    return _Numpy


def numba_kernels():
    """The compiled kernels, or None when numba is unavailable."""
    try:
        return _build_numba()
    except ImportError:
        return None


def select_kernels(choice: str | None = None):
    choice = (choice or os.environ.get(KERNELS_ENV, "numba")).lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"{KERNELS_ENV} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numba":
        k = numba_kernels()
        if k is not None:
            return k
    return _Numpy


KERNELS = select_kernels()
