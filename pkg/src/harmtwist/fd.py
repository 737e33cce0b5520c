"""Central differences with one Richardson halving.

The helpers accept any function of a 4-vector whose values support ``+``,
``-`` and scalar ``*`` (numpy arrays, harmonic polynomials).
"""

from __future__ import annotations

from typing import Any, Callable

import numpy as np


class StepTooLarge(ArithmeticError):
    """Richardson error estimate exceeded the requested tolerance."""


def default_step(x) -> float:
    return 1e-4 * (1.0 + float(np.linalg.norm(x)))


def size(value: Any) -> float:
    if hasattr(value, "norm") and not isinstance(value, np.ndarray):
        return float(value.norm())
    arr = np.asarray(value)
    return float(np.abs(arr).max()) if arr.size else 0.0


def _unit(mu: int) -> np.ndarray:
    e = np.zeros(4)
    e[mu] = 1.0
    return e


def _first(fn: Callable, x: np.ndarray, h: float) -> list:
    return [(fn(x + h * _unit(mu)) - fn(x - h * _unit(mu))) * (1.0 / (2 * h)) for mu in range(4)]


def _second(fn: Callable, x: np.ndarray, h: float) -> list[list]:
    f0 = fn(x)
    out = [[None] * 4 for _ in range(4)]
    for m in range(4):
        em = h * _unit(m)
        out[m][m] = (fn(x + em) - f0 * 2.0 + fn(x - em)) * (1.0 / h**2)
        for n in range(m + 1, 4):
            en = h * _unit(n)
            val = (fn(x + em + en) - fn(x + em - en) - fn(x - em + en) + fn(x - em - en)) * (1.0 / (4 * h**2))
            out[m][n] = out[n][m] = val
    return out


def _extrapolate(coarse, fine):
    return fine + (fine - coarse) * (1.0 / 3.0), size(fine - coarse) / 3.0


def _check(err: float, tol: float | None, h: float) -> None:
    if tol is not None and err > tol:
        raise StepTooLarge(f"Richardson error {err:.3e} exceeds {tol:.1e} at h={h:.3e}")


def gradient(fn: Callable, x, h: float | None = None, tol: float | None = None):
    """``[d_mu fn]`` for ``mu = 0..3`` and the Richardson error estimate."""
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else h
    if h <= 0:
        raise ValueError("step must be positive")
    coarse, fine = _first(fn, x, h), _first(fn, x, h / 2)
    pairs = [_extrapolate(c, f) for c, f in zip(coarse, fine)]
    err = max(e for _, e in pairs)
    _check(err, tol, h)
    return [v for v, _ in pairs], err


def hessian(fn: Callable, x, h: float | None = None, tol: float | None = None):
    """``[[d_mu d_nu fn]]`` and the Richardson error estimate."""
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else h
    if h <= 0:
        raise ValueError("step must be positive")
    coarse, fine = _second(fn, x, h), _second(fn, x, h / 2)
    out = [[None] * 4 for _ in range(4)]
    err = 0.0
    for m in range(4):
        for n in range(4):
            out[m][n], e = _extrapolate(coarse[m][n], fine[m][n])
            err = max(err, e)
    _check(err, tol, h)
    return out, err
