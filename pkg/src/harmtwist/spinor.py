"""Two-component spinor index calculus on flat R^4.

Index conventions
-----------------
Both dotted and undotted indices take values 0, 1 (written 1, 2 in the
literature).  The lowered epsilon is ``eps_{12} = +1`` and the raised one
satisfies ``eps^{ab} = -eps_{ab} = eps_{ba}``.

Raising and lowering depends on the chirality of the spinor:

* ``+`` spinors: ``s_a = s^b eps_{ab}``,  ``s^a = s_b eps^{ab}``
* ``-`` spinors: ``s_a = s^b eps_{ba}``,  ``s^a = s_b eps^{ba}``

for dotted indices, and the transposed pattern for undotted ones
(``x^{+a} = x^+_b eps^{ba}``, ``x^{-a} = x^-_b eps^{ab}``).  These are kept
literally because several downstream signs depend on the asymmetry.

A real 4-vector maps to the bispinor ``x^{a adot} = x^4 1 + i x^k sigma_k``.
This normalization is the one for which ``x^+_j x^{-j} = |x|^2``.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

Kind = Literal["dotted", "undotted"]
Chirality = Literal["+", "-"]

EPS_LOWER = np.array([[0.0, 1.0], [-1.0, 0.0]])
EPS_UPPER = -EPS_LOWER

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

#: ``SIGMA[mu][a, adot]`` so that ``x^{a adot} = sum_mu x^mu SIGMA[mu][a, adot]``.
SIGMA = np.array([1j * _PAULI[0], 1j * _PAULI[1], 1j * _PAULI[2], np.eye(2, dtype=complex)])


def lower_both(m: np.ndarray) -> np.ndarray:
    """Lower both indices of ``m^{a adot}``: ``m_{a adot} = eps_{ab} eps_{adot bdot} m^{b bdot}``."""
    return EPS_LOWER @ m @ EPS_LOWER.T


def raise_both(m: np.ndarray) -> np.ndarray:
    return EPS_UPPER @ m @ EPS_UPPER.T


#: lowered basis, ``SIGMA_LOWER[mu][a, adot] = (sigma_mu)_{a adot}``
SIGMA_LOWER = np.array([lower_both(s) for s in SIGMA])

#: ``d x^mu / d x^{a adot}``; the factor 1/2 follows from
#: ``(sigma_mu)_{a adot} sigma_nu^{a adot} = 2 delta_{mu nu}``.
DX_DSPINOR = 0.5 * SIGMA_LOWER


@dataclass(frozen=True)
class Epsilon:
    """Numeric epsilon blocks for both index kinds."""

    dotted_upper: np.ndarray = field(default_factory=lambda: EPS_UPPER.copy())
    dotted_lower: np.ndarray = field(default_factory=lambda: EPS_LOWER.copy())
    undotted_upper: np.ndarray = field(default_factory=lambda: EPS_UPPER.copy())
    undotted_lower: np.ndarray = field(default_factory=lambda: EPS_LOWER.copy())

    def blocks(self, kind: Kind) -> tuple[np.ndarray, np.ndarray]:
        if kind == "dotted":
            return self.dotted_upper, self.dotted_lower
        if kind == "undotted":
            return self.undotted_upper, self.undotted_lower
        raise ValueError(f"unknown index kind {kind!r}")

    @classmethod
    def corrupted(cls) -> "Epsilon":
        """Dotted blocks with the opposite sign; used to test fault localization."""
        return cls(dotted_upper=EPS_LOWER.copy(), dotted_lower=EPS_UPPER.copy())


#: convention read at call time by the gauge-field constructions
EPSILON = Epsilon()


@contextlib.contextmanager
def use_epsilon(eps: Epsilon):
    """Temporarily replace :data:`EPSILON` for code that reads it at call time."""
    global EPSILON
    saved, EPSILON = EPSILON, eps
    try:
        yield eps
    finally:
        EPSILON = saved


def _lowering_matrix(kind: Kind, chirality: Chirality, eps: Epsilon) -> np.ndarray:
    _, lo = eps.blocks(kind)
    # dotted "+" and undotted "-" contract eps on its second slot
    if (kind == "dotted") == (chirality == "+"):
        return lo
    return lo.T


def _raising_matrix(kind: Kind, chirality: Chirality, eps: Epsilon) -> np.ndarray:
    up, _ = eps.blocks(kind)
    if (kind == "dotted") == (chirality == "+"):
        return up
    return up.T


def lower_index(s, kind: Kind = "dotted", chirality: Chirality = "+", eps: Epsilon = EPSILON) -> np.ndarray:
    """Lower the index of a 2-component spinor ``s^a``.

    Extra trailing axes are carried along, so ``s`` may be a spinor of
    matrices.
    """
    s = np.asarray(s)
    return np.tensordot(_lowering_matrix(kind, chirality, eps), s, axes=(1, 0))


def raise_index(s, kind: Kind = "dotted", chirality: Chirality = "+", eps: Epsilon = EPSILON) -> np.ndarray:
    """Inverse of :func:`lower_index`."""
    s = np.asarray(s)
    return np.tensordot(_raising_matrix(kind, chirality, eps), s, axes=(1, 0))


@dataclass(frozen=True)
class Bispinor:
    """The matrix ``x^{a adot}`` attached to a point of R^4."""

    entries: np.ndarray

    @property
    def lowered(self) -> np.ndarray:
        return lower_both(self.entries)

    def norm2(self) -> float:
        """``|x|^2`` recovered from the spinor form, ``x^{a adot} x_{a adot} / 2``."""
        return float(0.5 * np.sum(self.entries * self.lowered).real)

    def to_vector(self) -> np.ndarray:
        return np.array([0.5 * np.sum(SIGMA_LOWER[mu] * self.entries).real for mu in range(4)])

    def reality_residual(self) -> float:
        return float(np.abs(self.entries - np.conj(self.lowered)).max())


def to_bispinor(x) -> Bispinor:
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {x.shape}")
    return Bispinor(np.einsum("m,mab->ab", x, SIGMA))


def project(x: Bispinor, u, chirality: Chirality) -> np.ndarray:
    """Upper-index projection ``x^{+-a} = u^{+-}_{adot} x^{a adot}``.

    ``u`` is a :class:`harmtwist.harmonic.HarmonicFrame` or anything with
    ``u_plus``/``u_minus`` attributes holding upper-index components.
    """
    comp = u.u_plus if chirality == "+" else u.u_minus
    return x.entries @ lower_index(comp, "dotted", chirality)


def project_lower(x: Bispinor, u, chirality: Chirality) -> np.ndarray:
    """Lower-index projection ``x^{+-}_a = u^{+- adot} x_{a adot}``."""
    comp = u.u_plus if chirality == "+" else u.u_minus
    return x.lowered @ comp


def spinor_gradient(grad_cartesian) -> np.ndarray:
    """Convert ``d/dx^mu`` components to ``d/dx^{a adot}``.

    The leading axis of ``grad_cartesian`` is the Cartesian index; the result
    has two leading spinor axes ``(a, adot)``.
    """
    g = np.asarray(grad_cartesian)
    return np.tensordot(DX_DSPINOR, g, axes=(0, 0))


def cartesian_from_spinor(comp) -> np.ndarray:
    """``A_mu = sigma_mu^{a adot} A_{a adot}`` for a one-form with spinor components."""
    comp = np.asarray(comp)
    return np.tensordot(SIGMA, comp, axes=([1, 2], [0, 1]))


def spinor_from_cartesian(comp) -> np.ndarray:
    """``A_{a adot} = (1/2)(sigma_mu)_{a adot} A_mu``; inverse of :func:`cartesian_from_spinor`."""
    comp = np.asarray(comp)
    return np.tensordot(DX_DSPINOR, comp, axes=(0, 0))
