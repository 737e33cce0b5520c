"""The transgression potential from the determinant series of ``D++ + V++``.

Series.  Write ``V-- = sum_n v_n`` with ``v_n`` of order ``n`` in ``V++``.
Flatness fixes the orders recursively,

    D++ v_1 = D-- V++,    D++ v_n = -[V++, v_{n-1}],

and the variation ``d/dlambda log Det(D++ + lambda V++) = int tr(V++ V--(lambda V++))``
integrates order by order to

    term_k = (1/k) int d^2u tr(V++ v_{k-1}),   k >= 2.

``v_1`` is computed as ``D--(G)`` with ``D++ G = V++``, which holds because
``[D++, D--] = D0`` vanishes on charge 0.  ``D--`` annihilates ``ker D++`` at
charge 0, so the result does not depend on the preimage chosen for ``G``.

Order one is local: with the particular solution ``G_1 = x^-_i x^{+j}/rho^2``
of ``D++ G_1 = V++`` it is ``int tr G_1 = t``, ``t = x^2/rho^2``.  Any
gauge-covariant preimage gives zero instead, and the difference ``t`` is
biharmonic, so it never reaches the fourth-order identity.

The resummed series is ``16 pi^2 T = log(1 + t)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .harmonic import Dmm, HarmonicPolynomial, integrate, invert_Dpp
from .prepotential import Bridge, Prepotential, instanton_bridge, instanton_prepotential, v_minus_minus, x_projections
from .report import Check

SIXTEEN_PI2 = 16 * math.pi**2

#: radius (in units of rho) inside which the series is used for profiles
SPLICE_RADIUS = 0.8


class ConvergenceWarning(UserWarning):
    """The last retained series term is not negligible against the partial sum."""


def _as_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {x.shape}")
    return x


def _real_scalar(value) -> float:
    return float(np.real(complex(np.asarray(value, dtype=complex))))


def local_term(x, rho: float = 1.0) -> float:
    """Order-one term ``int tr(x^-_i x^{+j}) / rho^2``."""
    p = x_projections(_as_point(x))
    g1 = p.minus_lower * p.plus_upper * (1.0 / rho**2)
    return _real_scalar(integrate(g1.trace()))


def series_terms(
    x,
    rho: float = 1.0,
    order: int = 10,
    *,
    max_degree: int | None = None,
    perturb: Callable[[HarmonicPolynomial], HarmonicPolynomial] | None = None,
) -> list[float]:
    """Terms ``k = 1..order`` of ``log Det(1 + (1/D++) V++)`` at ``x``.

    ``perturb`` is applied to the charge-0 preimage ``G`` of ``V++`` before
    ``D--`` is taken; adding elements of ``ker D++`` there must not change
    any term.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    x = _as_point(x)
    if max_degree is None:
        max_degree = 2 * order + 2
    terms = [local_term(x, rho)]
    if order == 1:
        return terms
    vpp = instanton_prepotential(rho).polynomial(x)
    g = invert_Dpp(vpp, max_degree)
    if perturb is not None:
        g = perturb(g)
    v = Dmm(g)
    for k in range(2, order + 1):
        integrand = (vpp * v).trace()
        if integrand.terms and integrand.charge != 0:
            raise AssertionError(f"order-{k} integrand has charge {integrand.charges}")
        terms.append(_real_scalar(integrate(integrand)) / k)
        if k < order:
            v = invert_Dpp(-vpp.commutator(v), max_degree)
    return terms


def series_term(k: int, x, rho: float = 1.0, max_degree: int | None = None) -> float:
    if max_degree is not None and max_degree < 2 * k + 2:
        raise ValueError("max_degree must be at least 2k+2")
    return series_terms(x, rho, k, max_degree=max_degree)[k - 1]


def series_terms_iterated(x, rho: float = 1.0, order: int = 10) -> list[float]:
    """Independent route: ``(-1)^(k+1)/k int tr(G_1^k)`` with the explicit ``G_1``."""
    p = x_projections(_as_point(x))
    g1 = p.minus_lower * p.plus_upper * (1.0 / rho**2)
    out = []
    power = HarmonicPolynomial.constant(np.eye(2, dtype=complex))
    for k in range(1, order + 1):
        power = power * g1
        out.append((-1) ** (k + 1) * _real_scalar(integrate(power.trace())) / k)
    return out


def log_series_coefficient(k: int, t: float) -> float:
    """``(-1)^(k+1) t^k / k``, the k-th Taylor term of ``log(1+t)``."""
    return (-1) ** (k + 1) * t**k / k


def closed_form_transgression(r, rho: float = 1.0):
    """``T = log(1 + r^2/rho^2) / (16 pi^2)``."""
    r = np.asarray(r, dtype=float)
    return np.log1p(r**2 / rho**2) / SIXTEEN_PI2


@dataclass
class SeriesTermTable:
    rho: float
    x: np.ndarray
    terms: list[tuple[int, float]] = field(default_factory=list)
    partial_sums: list[float] = field(default_factory=list)

    @property
    def t(self) -> float:
        return float(self.x @ self.x) / self.rho**2

    def closed_form(self) -> float:
        return math.log1p(self.t)

    def rows(self) -> list[dict]:
        cf = self.closed_form()
        return [
            {"k": k, "term": v, "partial_sum": s, "closed_form": cf, "residual": abs(s - cf)}
            for (k, v), s in zip(self.terms, self.partial_sums)
        ]


SERIES_COLUMNS = ("k", "term", "partial_sum", "closed_form", "residual")


def series_table(x, rho: float = 1.0, order: int = 30) -> SeriesTermTable:
    x = _as_point(x)
    vals = series_terms(x, rho, order)
    partial = list(np.cumsum(vals))
    return SeriesTermTable(rho, x, list(enumerate(vals, start=1)), [float(s) for s in partial])


def point_with_ratio(t: float, rho: float = 1.0, direction=None) -> np.ndarray:
    """A point with ``|x|^2 / rho^2 = t`` along ``direction`` (default: a fixed generic one)."""
    d = np.array([0.3, -0.5, 0.6, 0.4]) if direction is None else np.asarray(direction, dtype=float)
    return d / np.linalg.norm(d) * rho * math.sqrt(t)


class TransgressionValue(NamedTuple):
    value: float
    analytic_continuation: bool
    order: int


def _warn_if_unconverged(terms: Sequence[float], total: float) -> None:
    if terms and abs(terms[-1]) > 1e-12 * max(abs(total), 1e-300):
        warnings.warn(
            f"last series term {terms[-1]:.3e} exceeds 1e-12 of the partial sum {total:.3e}",
            ConvergenceWarning,
            stacklevel=3,
        )


def transgression(x, rho: float = 1.0, order: int = 30) -> TransgressionValue:
    """``T(x)`` from the series for ``|x| < rho``; the closed form outside, flagged."""
    x = _as_point(x)
    if order < 1:
        raise ValueError("order must be >= 1")
    if x @ x >= rho**2:
        return TransgressionValue(float(closed_form_transgression(np.linalg.norm(x), rho)), True, order)
    terms = series_terms(x, rho, order)
    total = math.fsum(terms)
    _warn_if_unconverged(terms, total)
    return TransgressionValue(total / SIXTEEN_PI2, False, order)


def ray_coefficients(rho: float = 1.0, order: int = 30, direction=None) -> np.ndarray:
    """Series terms at ``|x| = rho`` along a ray.

    ``V++`` is homogeneous of degree 2 in ``x``, so the k-th term at ``s x``
    is ``s^(2k)`` times the term at ``x``; a single evaluation covers the ray.
    """
    return np.array(series_terms(point_with_ratio(1.0, rho, direction), rho, order))


def transgression_profile(
    r_values,
    rho: float = 1.0,
    order: int = 30,
    *,
    splice: float = SPLICE_RADIUS,
    coefficients: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """``T`` on a radial grid: series for ``r < splice*rho``, closed form beyond.

    Returns ``(values, from_series_mask)``.
    """
    r = np.asarray(r_values, dtype=float)
    if coefficients is None:
        coefficients = ray_coefficients(rho, order)
    inside = r < splice * rho
    out = np.array(closed_form_transgression(r, rho), dtype=float)
    if inside.any():
        s = (r[inside] / rho) ** 2
        k = np.arange(1, len(coefficients) + 1)
        out[inside] = (coefficients[None, :] * s[:, None] ** k[None, :]).sum(axis=1) / SIXTEEN_PI2
    return out, inside


# ---------------------------------------------------------------------------
# variational identity


def _pairing(dvpp: HarmonicPolynomial, vmm: HarmonicPolynomial) -> float:
    return _real_scalar(integrate((dvpp * vmm).trace()))


def adaptive_order(t: float, eps: float = 1e-10, cap: int = 40) -> int:
    """Smallest order whose next log-series term is below ``eps`` (at least 2, at most ``cap``).

    Warns with :class:`ConvergenceWarning` when the cap cuts the series short.
    """
    if t <= 0:
        return 2
    needed = max(2, math.ceil(math.log(eps) / math.log(t) - 1e-9)) if t < 1 else math.inf
    if needed > cap:
        warnings.warn(f"order capped at {cap}; t = {t:.3g} needs {needed} terms for {eps:g}", ConvergenceWarning, stacklevel=2)
    return int(min(cap, needed))


def rescaled_terms(terms: Sequence[float], rho: float, new_rho: float) -> np.ndarray:
    """Series terms at size ``new_rho`` from those at ``rho``.

    ``V++`` carries ``1/rho^2``, so the k-th term scales as ``(rho/new_rho)^(2k)``.
    """
    k = np.arange(1, len(terms) + 1)
    return np.asarray(terms) * (rho / new_rho) ** (2 * k)


def _series_rho_difference(x: np.ndarray, rho: float, delta_rho: float, first: int, order: int | None) -> float:
    """Central difference in ``rho`` of the series summed from order ``first``."""
    t = float(x @ x) / rho**2
    terms = series_terms(x, rho, order or adaptive_order(t))
    up = math.fsum(rescaled_terms(terms, rho, rho + delta_rho)[first - 1 :])
    down = math.fsum(rescaled_terms(terms, rho, rho - delta_rho)[first - 1 :])
    return (up - down) / (2 * delta_rho)


def variation_check(x, rho: float = 1.0, delta_rho: float | None = None, tolerance: float = 1e-6, order: int | None = None) -> Check:
    """``d/drho [16 pi^2 T]`` against ``(1/2) int tr(dV++/drho V--)``.

    The left side is a central difference in ``rho`` of the series value of
    ``16 pi^2 T`` (closed form for ``|x| >= rho``); the right side uses
    ``dV++/drho = -2 V++/rho`` and the bridge-derived ``V--``.
    """
    x = _as_point(x)
    delta_rho = 1e-5 * rho if delta_rho is None else delta_rho
    if x @ x >= (rho - delta_rho) ** 2:
        lhs = (math.log1p(x @ x / (rho + delta_rho) ** 2) - math.log1p(x @ x / (rho - delta_rho) ** 2)) / (2 * delta_rho)
    else:
        lhs = _series_rho_difference(x, rho, delta_rho, 1, order)
    rhs = 0.5 * _pairing(instanton_prepotential(rho).rho_derivative(x), v_minus_minus(instanton_bridge(rho), x))
    return Check.compare("variation: d/drho 16pi^2 T vs 1/2 int tr(dV V--)", lhs, rhs, tolerance)


def nonlocal_log_det(x, rho: float = 1.0) -> float:
    """``log(1+t) - t``: the series without its local order-one term."""
    t = float(np.dot(x, x)) / rho**2
    return math.log1p(t) - t


def variation_identity_check(x, rho: float = 1.0, delta_rho: float | None = None, tolerance: float = 1e-6, order: int | None = None) -> Check:
    """``d/drho`` of the summed orders ``k >= 2`` against ``int tr(dV++/drho V--)``."""
    x = _as_point(x)
    delta_rho = 1e-5 * rho if delta_rho is None else delta_rho
    if x @ x >= (rho - delta_rho) ** 2:
        lhs = (nonlocal_log_det(x, rho + delta_rho) - nonlocal_log_det(x, rho - delta_rho)) / (2 * delta_rho)
    else:
        lhs = _series_rho_difference(x, rho, delta_rho, 2, order)
    rhs = _pairing(instanton_prepotential(rho).rho_derivative(x), v_minus_minus(instanton_bridge(rho), x))
    return Check.compare("variation: d/drho nonlocal log Det vs int tr(dV V--)", lhs, rhs, tolerance)


__all__ = [
    "Bridge",
    "ConvergenceWarning",
    "adaptive_order",
    "Prepotential",
    "SeriesTermTable",
    "TransgressionValue",
    "closed_form_transgression",
    "local_term",
    "log_series_coefficient",
    "nonlocal_log_det",
    "point_with_ratio",
    "ray_coefficients",
    "rescaled_terms",
    "series_table",
    "series_term",
    "series_terms",
    "series_terms_iterated",
    "transgression",
    "transgression_profile",
    "variation_check",
    "variation_identity_check",
]
