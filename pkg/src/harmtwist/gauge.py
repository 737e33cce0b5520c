"""SU(2) gauge fields on R^4: the BPST instanton, field strengths and charge density.

Connections are stored in spinor components ``A[a, adot, i, j] = (A_{a adot})_i^j``
(gauge matrices indexed row = lower index ``i``).  The Cartesian components
``A_mu = sigma_mu^{a adot} A_{a adot}`` are anti-hermitian and traceless.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import spinor
from .fd import StepTooLarge, default_step, gradient  # noqa: F401  (re-exported)
from .spinor import EPS_LOWER, EPS_UPPER, SIGMA_LOWER, cartesian_from_spinor, to_bispinor

# default Richardson tolerance on the curvature (absolute, per component)
DEFAULT_CURVATURE_TOL = 1e-6


@dataclass(frozen=True)
class GaugeField:
    components: np.ndarray
    point: np.ndarray
    rho: float | None = None

    def cartesian(self) -> np.ndarray:
        """``A_mu`` as an array of shape (4, 2, 2)."""
        return cartesian_from_spinor(self.components)

    def algebra_residual(self) -> float:
        """Max deviation of the ``A_mu`` from anti-hermitian traceless."""
        a = self.cartesian()
        herm = np.abs(a + np.conj(np.swapaxes(a, -1, -2))).max()
        tr = np.abs(np.trace(a, axis1=-2, axis2=-1)).max()
        return float(max(herm, tr))

    def conjugated(self, g: np.ndarray) -> "GaugeField":
        """Constant gauge rotation ``A -> g A g^{-1}``."""
        ginv = np.linalg.inv(g)
        return GaugeField(np.einsum("ij,abjk,kl->abil", g, self.components, ginv), self.point, self.rho)


@dataclass(frozen=True)
class CurvatureTensor:
    """Spinor blocks of ``F_{a adot b bdot} = eps_{adot bdot} f_{ab} + eps_{ab} f_{adot bdot}``."""

    f_undotted: np.ndarray
    f_dotted: np.ndarray
    point: np.ndarray
    error_estimate: float = 0.0

    def symmetry_residual(self) -> float:
        fu, fd = self.f_undotted, self.f_dotted
        return float(max(np.abs(fu - fu.transpose(1, 0, 2, 3)).max(), np.abs(fd - fd.transpose(1, 0, 2, 3)).max()))

    def self_duality_ratio(self) -> float:
        return block_norm(self.f_dotted) / block_norm(self.f_undotted)


def block_norm(blocks: np.ndarray) -> float:
    """Max Frobenius norm over the 2x2 gauge blocks."""
    return float(np.sqrt((np.abs(blocks) ** 2).sum(axis=(-2, -1))).max())


def bpst_connection(x, rho: float = 1.0) -> GaugeField:
    """One-instanton of size ``rho`` centred at the origin.

    ``A_{a adot i}^j = (x_{a adot} delta_i^j / 2 + eps_{ia} x^j_{adot}) / (rho^2 + x^2)``
    with ``x^j_{adot} = eps_{adot bdot} x^{j bdot}``.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    x = np.asarray(x, dtype=float)
    b = to_bispinor(x)
    x_mixed = b.entries @ spinor.EPSILON.dotted_lower.T  # x^j_{adot}
    comps = 0.5 * np.einsum("ab,ij->abij", b.lowered, np.eye(2))
    comps = comps + np.einsum("ia,jb->abij", EPS_LOWER, x_mixed)
    return GaugeField(comps / (rho**2 + x @ x), x, rho)


def field_strength_cartesian(field_fn: Callable, x, h: float | None = None, tol: float | None = DEFAULT_CURVATURE_TOL):
    """``F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]`` by Richardson-extrapolated central differences.

    Returns ``(F, error_estimate)``; raises :class:`StepTooLarge` when the
    estimate exceeds ``tol`` (``None`` disables the check).
    """
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else h
    grads, err = gradient(lambda y: field_fn(y).cartesian(), x, h, tol)
    dA = np.array(grads)  # dA[mu, nu] = d_mu A_nu
    a = field_fn(x).cartesian()
    comm = np.einsum("mij,njk->mnik", a, a)
    f = dA - dA.transpose(1, 0, 2, 3) + comm - comm.transpose(1, 0, 2, 3)
    return f, err


def spinor_blocks(f_cart: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``F_{mu nu}`` into ``(f_{ab}, f_{adot bdot})``.

    ``F_{a adot b bdot} = (1/4)(sigma_mu)_{a adot}(sigma_nu)_{b bdot} F_{mu nu}`` is the
    field strength in the coordinates ``x^{a adot}``; contracting with
    ``eps^{adot bdot}`` (resp. ``eps^{ab}``) and dividing by ``eps^{cd} eps_{cd} = -2``
    isolates each block.
    """
    fs = 0.25 * np.einsum("mab,ncd,mnij->abcdij", SIGMA_LOWER, SIGMA_LOWER, f_cart)
    f_undotted = -0.5 * np.einsum("bd,abcdij->acij", EPS_UPPER, fs)
    f_dotted = -0.5 * np.einsum("ac,abcdij->bdij", EPS_UPPER, fs)
    return f_undotted, f_dotted


def curvature(field_fn: Callable, x, h: float | None = None, tol: float | None = DEFAULT_CURVATURE_TOL) -> CurvatureTensor:
    x = np.asarray(x, dtype=float)
    f_cart, err = field_strength_cartesian(field_fn, x, h, tol)
    fu, fd = spinor_blocks(f_cart)
    return CurvatureTensor(fu, fd, x, err)


def raise_pair(f: np.ndarray) -> np.ndarray:
    """``f^{ab} = eps^{ac} eps^{bd} f_{cd}``."""
    return np.einsum("ac,bd,cdij->abij", EPS_UPPER, EPS_UPPER, f)


def _contract(f: np.ndarray) -> complex:
    return complex(np.einsum("abij,abji->", f, raise_pair(f)))


def chern_density(F: CurvatureTensor) -> float:
    """Top Chern character density ``-(1/8 pi^2) tr(F ^ F) / vol``.

    With derivatives taken along ``x^{a adot}`` this is
    ``-(1/2 pi^2) [tr f_{ab} f^{ab} - tr f_{adot bdot} f^{adot bdot}]``;
    it is ``6/pi^2`` at the centre of a unit instanton.
    """
    val = -(_contract(F.f_undotted) - _contract(F.f_dotted)) / (2 * math.pi**2)
    return float(val.real)


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


LEVI_CIVITA = _levi_civita()


def chern_density_cartesian(f_cart: np.ndarray) -> float:
    """``-(1/32 pi^2) eps^{mu nu rho sigma} tr F_{mu nu} F_{rho sigma}`` with ``eps^{1234} = +1``."""
    val = np.einsum("mnrs,mnij,rsji->", LEVI_CIVITA, f_cart, f_cart)
    return float(-val.real / (32 * math.pi**2))


def bpst_density(x, rho: float = 1.0, h: float | None = None) -> float:
    """Chern density of the numerically differentiated BPST field at ``x``."""
    return chern_density(curvature(lambda y: bpst_connection(y, rho), x, h))


#: fixed generic direction used for radial sampling of rotation-invariant densities
RADIAL_DIRECTION = np.array([0.3, -0.5, 0.6, 0.4]) / np.linalg.norm([0.3, -0.5, 0.6, 0.4])


def stretched_grid(r_max: float, n: int, stretch: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Radii clustered at the origin and the Jacobian ``dr/dxi`` on a uniform ``xi`` grid.

    ``r(xi) = r_max (1 - tanh(s (1 - xi)) / tanh(s))`` for ``xi`` in ``[0, 1]``.
    ``n`` is the number of intervals.  ``stretch = 0`` gives a uniform grid.
    """
    xi = np.linspace(0.0, 1.0, n + 1)
    if stretch == 0:
        return r_max * xi, np.full_like(xi, r_max)
    th = math.tanh(stretch)
    r = r_max * (1.0 - np.tanh(stretch * (1.0 - xi)) / th)
    jac = r_max * stretch / np.cosh(stretch * (1.0 - xi)) ** 2 / th
    return r, jac


def simpson(values: np.ndarray, dx: float) -> float:
    """Composite Simpson rule with compensated summation."""
    n = len(values) - 1
    if n < 2 or n % 2:
        raise ValueError("Simpson needs an even number of intervals")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return math.fsum(w * values) * dx / 3.0


def topological_charge(
    rho: float = 1.0,
    r_max: float = 100.0,
    n: int = 4000,
    *,
    stretch: float = 3.0,
    density: Callable[[np.ndarray], float] | None = None,
) -> float:
    """``int density(r) 2 pi^2 r^3 dr`` over ``[0, r_max]`` for a radial density.

    The default density is the numerically differentiated BPST field of size
    ``rho`` sampled along :data:`RADIAL_DIRECTION`.
    """
    if n < 100:
        raise ValueError("need at least 100 samples")
    if n % 2:
        n += 1
    if density is None:
        density = lambda y: bpst_density(y, rho)  # noqa: E731
    r, jac = stretched_grid(r_max, n, stretch)
    vals = np.array([density(ri * RADIAL_DIRECTION) for ri in r])
    return simpson(vals * 2 * math.pi**2 * r**3 * jac, 1.0 / n)


def bpst_density_closed_form(r, rho: float = 1.0):
    """``6 rho^4 / (pi^2 (r^2 + rho^2)^4)``."""
    r = np.asarray(r, dtype=float)
    return 6.0 * rho**4 / (math.pi**2 * (r**2 + rho**2) ** 4)
