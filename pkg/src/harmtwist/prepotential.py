"""Harmonic description of the one-instanton: prepotential, bridge, ``V--`` and reconstruction.

At a fixed point ``x`` every object here is a :class:`HarmonicPolynomial` in
``u`` with 2x2 gauge-matrix coefficients ``M[i, j] = M_i^j``.  The x-dependence
is handled by finite differences of the coefficients (module :mod:`fd`).

Frames.  The closed-form matrix

    U_c = (1 + x^2/rho^2)^(-1/2) (delta_i^j + x^-_i x^{+j} / rho^2)

maps the analytic frame to the central (u-independent) one.  Its inverse
``W = U_c^{-1}`` is the analytic bridge, with

    V++ = -D++(W) W^{-1},   V-- = -D--(W) W^{-1}.

Both ``W`` and ``W^{-1}`` are polynomial in ``u``.

Harmonic derivatives are ``d^{+-}_a = u^{+- adot} d/dx^{a adot}``.  In the
analytic frame ``nabla^+_a = d^+_a`` and ``nabla^-_a = d^-_a - d^+_a V--``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from . import fd
from .gauge import GaugeField
from .harmonic import (
    U_MINUS,
    U_PLUS,
    HarmonicFrame,
    HarmonicPolynomial,
    Dmm,
    Dpp,
    integrate,
    minus_lower,
    minus_upper,
    plus_lower,
    plus_upper,
)
from . import spinor
from .spinor import DX_DSPINOR, EPS_LOWER, EPS_UPPER, SIGMA, spinor_from_cartesian, to_bispinor

IDENTITY = np.eye(2, dtype=complex)

#: derivative step for the smooth rational coefficients of ``V--`` and ``W``
DEFAULT_STEP = 1e-3


class XProjections(NamedTuple):
    """``x^+_i``, ``x^-_i`` (2x1 columns) and ``x^{+j}``, ``x^{-j}`` (1x2 rows) as polynomials in u."""

    plus_lower: HarmonicPolynomial
    minus_lower: HarmonicPolynomial
    plus_upper: HarmonicPolynomial
    minus_upper: HarmonicPolynomial


def x_projections(x) -> XProjections:
    """Harmonic projections of ``x`` with the gauge index identified with the undotted one."""
    b = to_bispinor(np.asarray(x, dtype=float))
    up, lo = b.entries, b.lowered
    return XProjections(
        plus_lower([lo[:, a].reshape(2, 1) for a in range(2)]),
        minus_lower([lo[:, a].reshape(2, 1) for a in range(2)]),
        plus_upper([up[:, a].reshape(1, 2) for a in range(2)]),
        minus_upper([up[:, a].reshape(1, 2) for a in range(2)]),
    )


@dataclass(frozen=True)
class Prepotential:
    """``(V++)_i^j = x^+_i x^{+j} / rho^2``, charge +2."""

    rho: float
    charge: int = 2

    def polynomial(self, x) -> HarmonicPolynomial:
        p = x_projections(x)
        return p.plus_lower * p.plus_upper * (1.0 / self.rho**2)

    def rho_derivative(self, x) -> HarmonicPolynomial:
        """``dV++/drho = -2 V++ / rho``."""
        return self.polynomial(x) * (-2.0 / self.rho)

    def __call__(self, x, frame: HarmonicFrame) -> np.ndarray:
        return self.polynomial(x).evaluate(frame)


@dataclass(frozen=True)
class Bridge:
    """Charge-0 bridge between the analytic and central frames."""

    rho: float
    charge: int = 0

    def _n(self, x) -> tuple[HarmonicPolynomial, float]:
        p = x_projections(x)
        t = float(np.dot(x, x)) / self.rho**2
        return p.minus_lower * p.plus_upper * (1.0 / self.rho**2), t

    def central(self, x) -> HarmonicPolynomial:
        """``U_c = (1+t)^(-1/2) (1 + x^-_i x^{+j}/rho^2)``."""
        n, t = self._n(x)
        return (n + IDENTITY) * (1.0 / math.sqrt(1.0 + t))

    def analytic(self, x) -> HarmonicPolynomial:
        """``W = U_c^{-1} = sqrt(1+t) (1 - x^-_i x^{+j} / (rho^2 (1+t)))``."""
        n, t = self._n(x)
        return (IDENTITY - n * (1.0 / (1.0 + t))) * math.sqrt(1.0 + t)

    def inverse_residual(self, x, frame: HarmonicFrame) -> float:
        prod = self.analytic(x).evaluate(frame) @ self.central(x).evaluate(frame)
        return float(np.abs(prod - IDENTITY).max())

    def __call__(self, x, frame: HarmonicFrame) -> np.ndarray:
        return self.analytic(x).evaluate(frame)


def instanton_prepotential(rho: float = 1.0) -> Prepotential:
    if rho <= 0:
        raise ValueError("rho must be positive")
    return Prepotential(float(rho))


def instanton_bridge(rho: float = 1.0) -> Bridge:
    if rho <= 0:
        raise ValueError("rho must be positive")
    return Bridge(float(rho))


def v_plus_plus_from_bridge(bridge: Bridge, x) -> HarmonicPolynomial:
    """``-D++(W) W^{-1}``."""
    return -(Dpp(bridge.analytic(x)) * bridge.central(x))


def v_minus_minus(bridge: Bridge, x) -> HarmonicPolynomial:
    """``V-- = -D--(W) W^{-1}``, charge -2."""
    return -(Dmm(bridge.analytic(x)) * bridge.central(x))


def v_minus_minus_closed_form(x, rho: float = 1.0) -> HarmonicPolynomial:
    """``-x^-_i x^{-j} / (rho^2 + x^2)``."""
    p = x_projections(x)
    return p.minus_lower * p.minus_upper * (-1.0 / (rho**2 + float(np.dot(x, x))))


def flatness_polynomial(vpp: HarmonicPolynomial, vmm: HarmonicPolynomial) -> HarmonicPolynomial:
    """``D++ V-- - D-- V++ + [V++, V--]``."""
    return Dpp(vmm) - Dmm(vpp) + vpp.commutator(vmm)


def flatness_residual(vpp: HarmonicPolynomial, vmm: HarmonicPolynomial, x=None, frame: HarmonicFrame | None = None) -> float:
    """Frobenius norm of the flatness expression at ``frame``.

    ``vpp`` and ``vmm`` are the polynomials at the point ``x`` (kept in the
    signature for symmetry with the other residuals).  Without a frame the
    sphere constraints are imposed algebraically via ``canonical()``.
    """
    poly = flatness_polynomial(vpp, vmm)
    if frame is None:
        return poly.canonical().norm()
    return float(np.linalg.norm(poly.evaluate(frame)))


# ---------------------------------------------------------------------------
# harmonic x-derivatives


def spinor_derivatives(fn: Callable, x, h: float | None = DEFAULT_STEP, tol: float | None = None):
    """``d/dx^{a adot} fn`` as a 2x2 nested list, from Cartesian central differences."""
    grads, err = fd.gradient(fn, x, h, tol)
    out = [[sum((grads[mu] * complex(DX_DSPINOR[mu][a, ad]) for mu in range(4)), start=grads[0] * 0.0) for ad in range(2)] for a in range(2)]
    return out, err


def spinor_hessian(fn: Callable, x, h: float | None = DEFAULT_STEP, tol: float | None = None):
    """``d/dx^{a adot} d/dx^{b bdot} fn`` as a nested list indexed ``[a][adot][b][bdot]``."""
    hess, err = fd.hessian(fn, x, h, tol)
    zero = hess[0][0] * 0.0
    out = [[[[zero for _ in range(2)] for _ in range(2)] for _ in range(2)] for _ in range(2)]
    for a in range(2):
        for ad in range(2):
            for b in range(2):
                for bd in range(2):
                    acc = zero
                    for mu in range(4):
                        for nu in range(4):
                            c = complex(DX_DSPINOR[mu][a, ad] * DX_DSPINOR[nu][b, bd])
                            if c:
                                acc = acc + hess[mu][nu] * c
                    out[a][ad][b][bd] = acc
    return out, err


def _u_components(frame: HarmonicFrame | None, chirality: str):
    """Upper components ``u^{+-adot}`` as numbers (frame given) or generator monomials."""
    if frame is not None:
        return list(frame.u_plus if chirality == "+" else frame.u_minus)
    gens = U_PLUS if chirality == "+" else U_MINUS
    return [HarmonicPolynomial.monomial(g) for g in gens]


def harmonic_derivative(fn: Callable, x, chirality: str = "+", frame: HarmonicFrame | None = None, h: float | None = DEFAULT_STEP, tol: float | None = None):
    """``[d^{+-}_a fn for a in (0, 1)]``.

    With ``frame=None`` the u-factor is kept symbolic, so a polynomial-valued
    ``fn`` gives polynomials; otherwise ``fn`` should return arrays at that frame.
    """
    d, err = spinor_derivatives(fn, x, h, tol)
    u = _u_components(frame, chirality)
    return [u[0] * d[a][0] + u[1] * d[a][1] for a in range(2)], err


def harmonic_hessian(fn: Callable, x, chirality: str = "+", frame: HarmonicFrame | None = None, h: float | None = DEFAULT_STEP, tol: float | None = None):
    """``[[d^{+-}_a d^{+-}_b fn]]``."""
    d, err = spinor_hessian(fn, x, h, tol)
    u = _u_components(frame, chirality)
    out = [[None, None], [None, None]]
    for a in range(2):
        for b in range(2):
            acc = None
            for ad in range(2):
                for bd in range(2):
                    term = u[ad] * u[bd] * d[a][ad][b][bd] if frame is not None else (u[ad] * u[bd]) * d[a][ad][b][bd]
                    acc = term if acc is None else acc + term
            out[a][b] = acc
    return out, err


# ---------------------------------------------------------------------------
# checks on the instanton data


def analyticity_residual(prep: Prepotential, x, frame: HarmonicFrame, h: float | None = DEFAULT_STEP) -> float:
    """``max_a |d^+_a V++|`` at ``(x, u)``; analyticity means it vanishes."""
    d, _ = harmonic_derivative(lambda y: prep(y, frame), x, "+", frame, h)
    return max(float(np.linalg.norm(v)) for v in d)


def directional_analyticity_residual(prep: Prepotential, x, frame: HarmonicFrame, direction, h: float = DEFAULT_STEP) -> float:
    """Derivative of ``V++`` along the complex direction ``dx^{a adot} = c^a u^{+adot}``.

    Such displacements change only ``x^{-a}``; ``direction`` holds ``c^a``.
    The Cartesian displacement is complex, so ``V++`` is continued
    holomorphically through its polynomial dependence on ``x^{a adot}``.
    """
    dx_spinor = np.outer(np.asarray(direction, dtype=complex), frame.u_plus)  # dx^{a adot}
    base = to_bispinor(np.asarray(x, dtype=float)).entries

    def value(s: float) -> np.ndarray:
        return _prepotential_at_bispinor(prep.rho, base + s * dx_spinor, frame)

    return float(np.linalg.norm((value(h) - value(-h)) / (2 * h)))


def _prepotential_at_bispinor(rho: float, xs: np.ndarray, frame: HarmonicFrame) -> np.ndarray:
    """``V++`` evaluated directly from a (possibly complex) bispinor."""
    lo = EPS_LOWER @ xs @ EPS_LOWER.T
    xp_lower = lo @ frame.u_plus
    xp_upper = xs @ (EPS_LOWER @ frame.u_plus)
    return np.outer(xp_lower, xp_upper) / rho**2


def curvature_from_prepotential(bridge: Bridge, x, frame: HarmonicFrame | None = None, h: float | None = DEFAULT_STEP, tol: float | None = 1e-6) -> np.ndarray:
    """``f_{ab}`` in the central frame from second harmonic derivatives of ``V--``.

    In the analytic frame ``[nabla^+_a, nabla^-_b] = -d^+_a d^+_b V--``; since
    ``[nabla_{a adot}, nabla_{b bdot}] = eps_{adot bdot} f_{ab}`` and
    ``u^{+adot} u^{-bdot} eps_{adot bdot} = -1`` this commutator is ``-f``.
    Hence ``f = W^{-1} (d^+_a d^+_b V--) W``, which no longer depends on ``u``.
    Returned as an array ``[a, b, i, j]``.
    """
    frame = frame or HarmonicFrame.from_plus([1.0, 0.0])
    hess, _ = harmonic_hessian(lambda y: v_minus_minus(bridge, y).evaluate(frame), x, "+", frame, h, tol)
    w = bridge.analytic(x).evaluate(frame)
    w_inv = bridge.central(x).evaluate(frame)
    return np.array([[w_inv @ hess[a][b] @ w for b in range(2)] for a in range(2)])


def proof_chain_residual(prep: Prepotential, bridge: Bridge, x, frame: HarmonicFrame, h: float | None = DEFAULT_STEP) -> float:
    """``d^-_b V++ + D++(d^+_b V--) + [V++, d^+_b V--]`` at ``(x, u)``, max over ``b``."""
    dm_vpp, _ = harmonic_derivative(lambda y: prep(y, frame), x, "-", frame, h)
    dp_vmm, _ = harmonic_derivative(lambda y: v_minus_minus(bridge, y), x, "+", None, h)
    vpp = prep.polynomial(x)
    res = 0.0
    for b in range(2):
        rhs = Dpp(dp_vmm[b]) + vpp.commutator(dp_vmm[b])
        res = max(res, float(np.linalg.norm(dm_vpp[b] + rhs.evaluate(frame))))
    return res


def analytic_curvature_polynomials(bridge: Bridge, x, h: float | None = DEFAULT_STEP):
    """``F_{ab} = d^+_a d^+_b V--`` as polynomials in u (analytic frame, equals ``W f W^{-1}``)."""
    out, _ = harmonic_hessian(lambda y: v_minus_minus(bridge, y), x, "+", None, h)
    return out


def covariant_constancy_residual(prep: Prepotential, bridge: Bridge, x, frame: HarmonicFrame, h: float | None = DEFAULT_STEP) -> float:
    """``max_{ab} |D++ F_{ab} + [V++, F_{ab}]|`` at ``(x, u)``."""
    f = analytic_curvature_polynomials(bridge, x, h)
    vpp = prep.polynomial(x)
    return max(float(np.linalg.norm((Dpp(f[a][b]) + vpp.commutator(f[a][b])).evaluate(frame))) for a in range(2) for b in range(2))


def bianchi_residual(bridge: Bridge, x, frame: HarmonicFrame, h: float = 2e-3, h_inner: float = DEFAULT_STEP) -> float:
    """``max_a |eps^{bc} (d^-_c F_{ab} + [A^-_c, F_{ab}])|`` with ``A^-_c = -d^+_c V--``."""

    def f_at(y):
        hess, _ = harmonic_hessian(lambda z: v_minus_minus(bridge, z).evaluate(frame), y, "+", frame, h_inner)
        return np.array([[hess[a][b] for b in range(2)] for a in range(2)])

    f = f_at(np.asarray(x, dtype=float))
    df, _ = harmonic_derivative(f_at, x, "-", frame, h)
    dvmm, _ = harmonic_derivative(lambda y: v_minus_minus(bridge, y).evaluate(frame), x, "+", frame, h_inner)
    a_minus = [-dvmm[c] for c in range(2)]
    res = 0.0
    for a in range(2):
        acc = np.zeros((2, 2), dtype=complex)
        for b in range(2):
            for c in range(2):
                if EPS_UPPER[b, c]:
                    comm = a_minus[c] @ f[a, b] - f[a, b] @ a_minus[c]
                    acc = acc + EPS_UPPER[b, c] * (df[c][a, b] + comm)
        res = max(res, float(np.linalg.norm(acc)))
    return res


# ---------------------------------------------------------------------------
# reconstruction


def reconstruction_integrand(bridge: Bridge, x, h: float | None = DEFAULT_STEP):
    """``u^-_adot W^{-1} d^+_a W`` as polynomials indexed ``[a][adot]``."""
    dw, _ = harmonic_derivative(bridge.analytic, x, "+", None, h)
    w_inv = bridge.central(x)
    u_minus = _u_components(None, "-")
    # u^-_adot = eps_{badot} u^{-b}
    eps = spinor.EPSILON.dotted_lower
    lowered = [u_minus[0] * eps[0, ad] + u_minus[1] * eps[1, ad] for ad in range(2)]
    return [[lowered[ad] * (w_inv * dw[a]) for ad in range(2)] for a in range(2)]


#: ``int u^{+adot} u^-_bdot = delta / 2`` makes the bare integral half the connection
RECONSTRUCTION_FACTOR = 2.0


def reconstruct_gauge_field(bridge: Bridge, x, h: float | None = DEFAULT_STEP) -> GaugeField:
    """``A_{a adot} = 2 int d^2u u^-_adot (W^{-1} d^+_a W)`` by exact harmonic integration."""
    x = np.asarray(x, dtype=float)
    integrand = reconstruction_integrand(bridge, x, h)
    comps = np.zeros((2, 2, 2, 2), dtype=complex)
    for a in range(2):
        for ad in range(2):
            comps[a, ad] = RECONSTRUCTION_FACTOR * np.asarray(integrate(integrand[a][ad]), dtype=complex)
    return GaugeField(comps, x, bridge.rho)


def su2_coordinates(a_cart: np.ndarray) -> np.ndarray:
    """Real coordinates ``a^k`` with ``A = a^k (i sigma_k)``; shape ``(..., 3)``."""
    return np.stack([-0.5 * np.trace(a_cart @ SIGMA[k], axis1=-2, axis2=-1).real for k in range(3)], axis=-1)


def from_su2_coordinates(coords: np.ndarray) -> np.ndarray:
    return np.einsum("...k,kij->...ij", coords, SIGMA[:3])


class Alignment(NamedTuple):
    rotation: np.ndarray
    aligned: list[GaugeField]
    residual: float


def align_constant_gauge(reference: Sequence[GaugeField], fields: Sequence[GaugeField]) -> Alignment:
    """Best constant SU(2) rotation of ``fields`` onto ``reference`` (adjoint Kabsch fit).

    ``residual`` is the max componentwise deviation after alignment.
    """
    ref = np.concatenate([su2_coordinates(f.cartesian()) for f in reference])
    mov = np.concatenate([su2_coordinates(f.cartesian()) for f in fields])
    if np.abs(mov).max() == 0:
        rot = np.eye(3)
    else:
        rot = Rotation.align_vectors(ref, mov)[0].as_matrix()
    aligned = []
    residual = 0.0
    for r, f in zip(reference, fields):
        cart = from_su2_coordinates(su2_coordinates(f.cartesian()) @ rot.T)
        g = GaugeField(spinor_from_cartesian(cart), f.point, f.rho)
        aligned.append(g)
        residual = max(residual, float(np.abs(g.components - r.components).max()))
    return Alignment(rot, aligned, residual)
