"""Polynomial functions of harmonic variables.

The generators are the four upper-index components ``u^{+1}, u^{+2},
u^{-1}, u^{-2}`` treated as independent commuting variables.  The sphere
constraints ``u^+_a u^{+a} = 0`` and ``u^+_a u^{-a} = 1`` are not quotiented
out in storage; they enter only through :func:`integrate`, the quadrature
oracle and :meth:`HarmonicPolynomial.canonical`.

On this ring

    D++ = u^{+a} d/du^{-a},   D-- = u^{-a} d/du^{+a},
    D0  = u^{+a} d/du^{+a} - u^{-a} d/du^{-a}.

A frame is realized on the sphere as ``u^{+a} = (a, b)`` with
``|a|^2 + |b|^2 = 1`` and ``u^{-a} = (conj b, -conj a)``, which is the
solution of ``conj(u^{+-a}) = u^{-+}_a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Literal, NamedTuple

import numpy as np
from scipy.linalg import null_space

from .report import Check, VerificationReport
from .spinor import EPS_LOWER, lower_index

Operator = Literal["D++", "D--", "D0"]


class NotInImage(ArithmeticError):
    """Raised when ``D++ x = y`` has no solution on the truncated basis."""


class ChargeMismatch(ValueError):
    """Raised when an operation needs a polynomial of homogeneous charge."""


class HarmonicMonomial(NamedTuple):
    """Powers of ``u^{+1}, u^{+2}, u^{-1}, u^{-2}``."""

    p1: int
    p2: int
    q1: int
    q2: int

    @property
    def charge(self) -> int:
        return self.p1 + self.p2 - self.q1 - self.q2

    @property
    def degree(self) -> int:
        return self.p1 + self.p2 + self.q1 + self.q2

    @property
    def plus_degrees(self) -> tuple[int, int]:
        return (self.p1, self.p2)

    @property
    def minus_degrees(self) -> tuple[int, int]:
        return (self.q1, self.q2)

    def __mul__(self, other):  # type: ignore[override]
        return HarmonicMonomial(self[0] + other[0], self[1] + other[1], self[2] + other[2], self[3] + other[3])

    def evaluate(self, u_plus, u_minus):
        return (u_plus[0] ** self.p1) * (u_plus[1] ** self.p2) * (u_minus[0] ** self.q1) * (u_minus[1] ** self.q2)


ONE = HarmonicMonomial(0, 0, 0, 0)
U_PLUS = (HarmonicMonomial(1, 0, 0, 0), HarmonicMonomial(0, 1, 0, 0))
U_MINUS = (HarmonicMonomial(0, 0, 1, 0), HarmonicMonomial(0, 0, 0, 1))


def _mul_coeff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim == 2 and b.ndim == 2:
        return a @ b
    return a * b


def _promote(c: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Scalars combine with matrix coefficients as multiples of the identity."""
    if c.shape == tuple(shape):
        return c
    if c.ndim == 0 and len(shape) == 2:
        return c * np.eye(shape[0], dtype=object if c.dtype == object else complex)
    raise ValueError(f"coefficient shape {c.shape} does not match {shape}")


def _is_zero(c: np.ndarray) -> bool:
    if c.dtype == object:
        return all(v == 0 for v in c.flat)
    return not c.any()


class HarmonicPolynomial:
    """Finite sum of harmonic monomials with scalar or square-matrix coefficients.

    Coefficients are numpy arrays of shape ``()`` (scalars) or ``(n, n)``.
    Object arrays of :class:`fractions.Fraction` are supported for exact
    arithmetic.
    """

    __slots__ = ("terms", "shape")
    # let numpy operands defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, terms: dict | None = None, shape: tuple[int, ...] | None = None):
        items = [(m if type(m) is HarmonicMonomial else HarmonicMonomial(*m), np.asarray(c)) for m, c in (terms or {}).items()]
        if shape is None:
            shape = max((c.shape for _, c in items), key=len, default=())
        clean: dict[HarmonicMonomial, np.ndarray] = {}
        for mono, c in items:
            c = _promote(c, shape)
            if not _is_zero(c):
                clean[mono] = c
        self.terms = clean
        self.shape = tuple(shape)

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, shape: tuple[int, ...] = ()) -> "HarmonicPolynomial":
        return cls({}, shape)

    @classmethod
    def constant(cls, value) -> "HarmonicPolynomial":
        value = np.asarray(value)
        return cls({ONE: value}, value.shape)

    @classmethod
    def monomial(cls, mono, coeff=1) -> "HarmonicPolynomial":
        coeff = np.asarray(coeff)
        return cls({HarmonicMonomial(*mono): coeff}, coeff.shape)

    @classmethod
    def linear(cls, plus=None, minus=None) -> "HarmonicPolynomial":
        """``plus[a] u^{+a} + minus[a] u^{-a}``; entries may be arrays."""
        terms: dict = {}
        shape = None
        for gens, coeffs in ((U_PLUS, plus), (U_MINUS, minus)):
            if coeffs is None:
                continue
            for gen, c in zip(gens, coeffs):
                c = np.asarray(c)
                shape = c.shape
                terms[gen] = terms.get(gen, 0) + c
        return cls(terms, shape)

    # algebra ----------------------------------------------------------

    def copy(self) -> "HarmonicPolynomial":
        return HarmonicPolynomial({m: c.copy() for m, c in self.terms.items()}, self.shape)

    def _coerce(self, other) -> "HarmonicPolynomial":
        if isinstance(other, HarmonicPolynomial):
            return other
        return HarmonicPolynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        shape = self.shape if len(self.shape) >= len(other.shape) else other.shape
        out = {m: _promote(c, shape) for m, c in self.terms.items()}
        for m, c in other.terms.items():
            c = _promote(c, shape)
            out[m] = out[m] + c if m in out else c
        return HarmonicPolynomial(out, shape)

    __radd__ = __add__

    def __neg__(self):
        return HarmonicPolynomial({m: -c for m, c in self.terms.items()}, self.shape)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, HarmonicPolynomial):
            other = np.asarray(other)
            if other.ndim == 0:
                return HarmonicPolynomial({m: c * other for m, c in self.terms.items()}, self.shape)
            other = HarmonicPolynomial.constant(other)
        if len(self.shape) == 2 and len(other.shape) == 2:
            shape = (self.shape[0], other.shape[1])
        else:
            shape = self.shape if len(self.shape) >= len(other.shape) else other.shape
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                prod = _mul_coeff(c1, c2)
                out[m] = out[m] + prod if m in out else prod
        return HarmonicPolynomial(out, shape)

    def __rmul__(self, other):
        other = np.asarray(other)
        if other.ndim == 0:
            return self * other
        return HarmonicPolynomial.constant(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        result = HarmonicPolynomial.constant(np.eye(self.shape[0], dtype=complex) if self.shape else 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def commutator(self, other) -> "HarmonicPolynomial":
        return self * other - other * self

    def map_coefficients(self, fn: Callable[[np.ndarray], np.ndarray]) -> "HarmonicPolynomial":
        out = {m: np.asarray(fn(c)) for m, c in self.terms.items()}
        shape = next(iter(out.values())).shape if out else ()
        return HarmonicPolynomial(out, shape)

    def trace(self) -> "HarmonicPolynomial":
        if len(self.shape) != 2:
            return self.copy()
        return self.map_coefficients(np.trace)

    # inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self) -> str:
        return f"HarmonicPolynomial({len(self.terms)} terms, shape={self.shape}, charges={sorted(self.charges)})"

    @property
    def charges(self) -> set[int]:
        return {m.charge for m in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.charges) <= 1

    @property
    def charge(self) -> int | None:
        """Charge of a homogeneous polynomial; ``None`` when charges are mixed.

        The zero polynomial reports charge 0.
        """
        ch = self.charges
        if not ch:
            return 0
        if len(ch) > 1:
            return None
        return next(iter(ch))

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def norm(self) -> float:
        """Coefficient-space norm (Frobenius over all monomials)."""
        return float(math.sqrt(sum(float(np.sum(np.abs(c.astype(complex)) ** 2)) for c in self.terms.values())))

    def charge_part(self, q: int) -> "HarmonicPolynomial":
        return HarmonicPolynomial({m: c for m, c in self.terms.items() if m.charge == q}, self.shape)

    def evaluate(self, frame) -> np.ndarray:
        """Value at a frame (anything with ``u_plus``/``u_minus``)."""
        return self.evaluate_at(frame.u_plus, frame.u_minus)

    def evaluate_at(self, u_plus, u_minus) -> np.ndarray:
        total = np.zeros(self.shape, dtype=complex)
        for m, c in self.terms.items():
            total = total + m.evaluate(u_plus, u_minus) * c.astype(complex)
        return total

    def canonical(self) -> "HarmonicPolynomial":
        """Normal form modulo ``u^+_a u^{-a} = 1``.

        With ``u^+_a u^{-a} = u^{+2}u^{-1} - u^{+1}u^{-2}`` the rewrite rule
        ``u^{+1}u^{-2} -> u^{+2}u^{-1} - 1`` is applied until no monomial
        contains both ``u^{+1}`` and ``u^{-2}``.
        """
        pending = dict(self.terms)
        out: dict = {}
        while pending:
            m, c = pending.popitem()
            if m.p1 and m.q2:
                for target, sign in (
                    (HarmonicMonomial(m.p1 - 1, m.p2 + 1, m.q1 + 1, m.q2 - 1), 1),
                    (HarmonicMonomial(m.p1 - 1, m.p2, m.q1, m.q2 - 1), -1),
                ):
                    pending[target] = pending[target] + sign * c if target in pending else sign * c
            else:
                out[m] = out[m] + c if m in out else c
        return HarmonicPolynomial(out, self.shape)

    def equals_on_shell(self, other, tol: float = 0.0) -> bool:
        diff = (self - other).canonical()
        return diff.norm() <= tol


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class HarmonicFrame:
    """A point of the harmonic sphere, stored as upper-index components."""

    u_plus: np.ndarray
    u_minus: np.ndarray

    @classmethod
    def from_plus(cls, u_plus) -> "HarmonicFrame":
        a, b = np.asarray(u_plus, dtype=complex) / np.linalg.norm(u_plus)
        return cls(np.array([a, b]), np.array([np.conj(b), -np.conj(a)]))

    @classmethod
    def from_angles(cls, s: float, phi1: float, phi2: float) -> "HarmonicFrame":
        """Chart used by the quadrature oracle: ``u^{+a} = (sqrt(s) e^{i phi1}, sqrt(1-s) e^{i phi2})``."""
        return cls.from_plus([math.sqrt(s) * np.exp(1j * phi1), math.sqrt(1.0 - s) * np.exp(1j * phi2)])

    @classmethod
    def random(cls, rng: np.random.Generator) -> "HarmonicFrame":
        return cls.from_plus(rng.normal(size=2) + 1j * rng.normal(size=2))

    @property
    def u_plus_lower(self) -> np.ndarray:
        return lower_index(self.u_plus, "dotted", "+")

    @property
    def u_minus_lower(self) -> np.ndarray:
        return lower_index(self.u_minus, "dotted", "-")

    def normalization_residual(self) -> float:
        pp = self.u_plus_lower @ self.u_plus
        pm = self.u_plus_lower @ self.u_minus
        return float(max(abs(pp), abs(pm - 1.0)))

    def reality_residual(self) -> float:
        return float(
            max(
                np.abs(np.conj(self.u_plus) - self.u_minus_lower).max(),
                np.abs(np.conj(self.u_minus) - self.u_plus_lower).max(),
            )
        )


# ---------------------------------------------------------------------------
# sl(2) operators


def _apply_monomial(op: Operator, m: HarmonicMonomial) -> list[tuple[HarmonicMonomial, int]]:
    p1, p2, q1, q2 = m
    if op == "D++":
        out = []
        if q1:
            out.append((HarmonicMonomial(p1 + 1, p2, q1 - 1, q2), q1))
        if q2:
            out.append((HarmonicMonomial(p1, p2 + 1, q1, q2 - 1), q2))
        return out
    if op == "D--":
        out = []
        if p1:
            out.append((HarmonicMonomial(p1 - 1, p2, q1 + 1, q2), p1))
        if p2:
            out.append((HarmonicMonomial(p1, p2 - 1, q1, q2 + 1), p2))
        return out
    if op == "D0":
        return [(m, m.charge)] if m.charge else []
    raise ValueError(f"unknown operator {op!r}")


def apply_D(op: Operator, f: HarmonicPolynomial) -> HarmonicPolynomial:
    out: dict = {}
    for m, c in f.terms.items():
        for target, k in _apply_monomial(op, m):
            out[target] = out[target] + k * c if target in out else k * c
    return HarmonicPolynomial(out, f.shape)


def Dpp(f: HarmonicPolynomial) -> HarmonicPolynomial:
    return apply_D("D++", f)


def Dmm(f: HarmonicPolynomial) -> HarmonicPolynomial:
    return apply_D("D--", f)


def D0(f: HarmonicPolynomial) -> HarmonicPolynomial:
    return apply_D("D0", f)


def monomials(max_degree: int) -> Iterable[HarmonicMonomial]:
    for d in range(max_degree + 1):
        for p1 in range(d + 1):
            for p2 in range(d + 1 - p1):
                for q1 in range(d + 1 - p1 - p2):
                    yield HarmonicMonomial(p1, p2, q1, d - p1 - p2 - q1)


def commutator_check(max_degree: int = 8) -> VerificationReport:
    """Check the sl(2) brackets exactly on every monomial up to ``max_degree``."""
    worst = {"[D++,D--]=D0": 0, "[D0,D++]=2D++": 0, "[D0,D--]=-2D--": 0}
    count = 0
    for m in monomials(max_degree):
        f = HarmonicPolynomial.monomial(m, 1)
        count += 1
        residuals = {
            "[D++,D--]=D0": Dpp(Dmm(f)) - Dmm(Dpp(f)) - D0(f),
            "[D0,D++]=2D++": D0(Dpp(f)) - Dpp(D0(f)) - Dpp(f) * 2,
            "[D0,D--]=-2D--": D0(Dmm(f)) - Dmm(D0(f)) + Dmm(f) * 2,
        }
        for name, r in residuals.items():
            worst[name] = max(worst[name], r.norm())
    report = VerificationReport(metadata={"max_degree": max_degree, "monomials": count})
    for name, res in worst.items():
        report.add(Check.bound(f"sl2 {name}", res, 0.0))
    return report


# ---------------------------------------------------------------------------
# integration


@lru_cache(maxsize=None)
def _contraction(p1: int, p2: int, m1: int, m2: int) -> Fraction:
    """``int u^{+1}^p1 u^{+2}^p2 (u^-_1)^m1 (u^-_2)^m2`` by iterated pair contraction.

    Splitting off one ``u^{+a}`` and pairing it with each lower ``u^-_b`` in
    turn, the totally symmetric remainder integrates to zero and each pair
    ``u^{+a} u^-_b`` contributes ``delta^a_b / (n + 1)``, where ``n`` is the
    number of ``u^+`` factors.  At ``n = 1`` this is ``u^{+a}u^-_a = 1``.
    """
    n = p1 + p2
    if n != m1 + m2:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    if p1:
        return Fraction(m1, n + 1) * _contraction(p1 - 1, p2, m1 - 1, m2) if m1 else Fraction(0)
    return Fraction(m2, n + 1) * _contraction(p1, p2 - 1, m1, m2 - 1) if m2 else Fraction(0)


def monomial_integral(m: HarmonicMonomial) -> Fraction:
    """Exact integral of a single monomial.

    Upper ``u^{-1}, u^{-2}`` are rewritten as ``u^-_2, -u^-_1`` before
    contracting, so ``(u^{-2})^q2`` carries the sign ``(-1)^q2``.
    """
    if m.charge:
        return Fraction(0)
    value = _contraction(m.p1, m.p2, m.q2, m.q1)
    return -value if m.q2 % 2 else value


def integrate(f: HarmonicPolynomial):
    """Algebraic integral over the harmonic sphere with ``int 1 = 1``.

    Returns an array of the coefficient shape.  With exact (object/Fraction)
    coefficients the result is exact.
    """
    exact = any(c.dtype == object for c in f.terms.values())
    total = np.zeros(f.shape, dtype=object if exact else complex)
    for m, c in f.terms.items():
        w = monomial_integral(m)
        if w:
            total = total + (w * c if exact else float(w) * c)
    return total


def integrate_total_derivative_check(f: HarmonicPolynomial) -> float:
    """``|int D++ f|`` for ``f`` of charge -2; vanishes identically."""
    if f.terms and f.charge != -2:
        raise ChargeMismatch(f"expected charge -2, got {f.charges}")
    val = integrate(Dpp(f))
    return float(np.max(np.abs(np.asarray(val, dtype=complex)))) if np.size(val) else 0.0


def quadrature_integrate(func: Callable[["HarmonicFrame"], np.ndarray] | HarmonicPolynomial, order: int = 16):
    """Sphere average by tensor quadrature; independent check of :func:`integrate`.

    Chart: ``u^{+a} = (sqrt(s) e^{i phi1}, sqrt(1-s) e^{i phi2})`` with
    ``u^- = (conj u^{+2}, -conj u^{+1})``.  The normalized invariant measure is
    ``ds dphi1 dphi2 / (2 pi)^2`` on ``[0,1] x [0,2pi)^2``.  Gauss-Legendre in
    ``s`` and the trapezoid rule in the angles integrate a polynomial of
    degree ``< order`` in ``u^+`` and in ``u^-`` exactly.
    """
    if isinstance(func, HarmonicPolynomial):
        poly = func
        func = poly.evaluate
    nodes, weights = np.polynomial.legendre.leggauss(order // 2 + 1)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    nphi = order + 1
    phis = 2.0 * np.pi * np.arange(nphi) / nphi
    total = 0
    for s, w in zip(nodes, weights):
        for p1 in phis:
            for p2 in phis:
                total = total + w * np.asarray(func(HarmonicFrame.from_angles(s, p1, p2)))
    return total / nphi**2


# ---------------------------------------------------------------------------
# inverting D++


def _block_monomials(degree: int, charge: int, n1: int) -> list[HarmonicMonomial]:
    """Monomials of given degree, charge and index-1 count ``p1 + q1``.

    ``D++`` preserves the degree and ``p1 + q1``, so its matrix is block
    diagonal in these labels.
    """
    if (degree + charge) % 2:
        return []
    n_plus = (degree + charge) // 2
    n_minus = degree - n_plus
    if n_plus < 0 or n_minus < 0:
        return []
    out = []
    for p1 in range(n_plus + 1):
        q1 = n1 - p1
        if 0 <= q1 <= n_minus:
            out.append(HarmonicMonomial(p1, n_plus - p1, q1, n_minus - q1))
    return out


def monomial_weight(m: HarmonicMonomial) -> float:
    """Sphere L2 norm of a monomial, ``sqrt((p1+q2)! (p2+q1)! / (degree+1)!)``.

    On the sphere ``|u^{-1}| = |u^{+2}|`` and ``|u^{-2}| = |u^{+1}|``, which
    reduces the norm to a single Haar moment.
    """
    return math.sqrt(math.factorial(m.p1 + m.q2) * math.factorial(m.p2 + m.q1) / math.factorial(m.degree + 1))


@lru_cache(maxsize=4096)
def _dpp_block(degree: int, charge: int, n1: int):
    """``(domain, codomain, matrix, weighted pseudo-inverse)`` of ``D++`` from ``charge - 2`` to ``charge``.

    The pseudo-inverse is taken in coordinates scaled by :func:`monomial_weight`;
    raw monomial coefficients span dozens of orders of magnitude at high degree.
    """
    domain = _block_monomials(degree, charge - 2, n1)
    codomain = _block_monomials(degree, charge, n1)
    index = {m: i for i, m in enumerate(codomain)}
    mat = np.zeros((len(codomain), len(domain)))
    for j, m in enumerate(domain):
        for target, k in _apply_monomial("D++", m):
            mat[index[target], j] += k
    if not mat.size:
        return tuple(domain), tuple(codomain), mat, mat.T
    wd = np.array([monomial_weight(m) for m in domain])
    wc = np.array([monomial_weight(m) for m in codomain])
    pinv = np.linalg.pinv(wc[:, None] * mat / wd[None, :]) * wc[None, :] / wd[:, None]
    return tuple(domain), tuple(codomain), mat, pinv


def invert_Dpp(y: HarmonicPolynomial, max_degree: int | None = None, rtol: float = 1e-10) -> HarmonicPolynomial:
    """Minimum-norm ``x`` with ``D++ x = y`` on the monomial basis.

    The norm is the diagonal one with the monomials weighted by
    :func:`monomial_weight`, so the solution is orthogonal to ``ker D++`` in
    that inner product.  ``max_degree`` bounds the basis; ``D++`` preserves
    degree, so it only needs to cover ``y``.
    """
    if not y.terms:
        return HarmonicPolynomial.zero(y.shape)
    charge = y.charge
    if charge is None:
        raise ChargeMismatch(f"invert_Dpp needs homogeneous charge, got {sorted(y.charges)}")
    if max_degree is not None and y.degree > max_degree:
        raise NotInImage(f"degree {y.degree} exceeds the truncated basis (max_degree={max_degree})")

    blocks: dict[tuple[int, int], list[HarmonicMonomial]] = {}
    for m in y.terms:
        blocks.setdefault((m.degree, m.p1 + m.q1), []).append(m)

    out: dict = {}
    scale = y.norm()
    for (degree, n1), _ in blocks.items():
        domain, codomain, mat, pinv = _dpp_block(degree, charge, n1)
        rhs = np.stack([np.asarray(y.terms.get(m, np.zeros(y.shape)), dtype=complex) for m in codomain])
        if not domain:
            if np.abs(rhs).max() > rtol * max(scale, 1.0):
                raise NotInImage(f"no preimage at degree {degree}, charge {charge}")
            continue
        flat = rhs.reshape(len(codomain), -1)
        sol = pinv @ flat
        resid = np.abs(mat @ sol - flat).max()
        if resid > rtol * max(scale, 1.0):
            raise NotInImage(f"D++ x = y inconsistent at degree {degree}, charge {charge} (residual {resid:.3e})")
        for j, m in enumerate(domain):
            out[m] = sol[j].reshape(y.shape)
    return HarmonicPolynomial(out, y.shape)


def dpp_kernel(charge: int, degree: int) -> list[HarmonicPolynomial]:
    """Scalar basis of ``ker D++`` among monomials of given charge and degree."""
    basis = []
    for n1 in range(degree + 1):
        domain = _block_monomials(degree, charge, n1)
        if not domain:
            continue
        codomain = _block_monomials(degree, charge + 2, n1)
        index = {m: i for i, m in enumerate(codomain)}
        mat = np.zeros((len(codomain), len(domain)))
        for j, m in enumerate(domain):
            for target, k in _apply_monomial("D++", m):
                mat[index[target], j] += k
        ns = null_space(mat) if codomain else np.eye(len(domain))
        for col in ns.T:
            basis.append(HarmonicPolynomial({m: v for m, v in zip(domain, col)}))
    return basis


# ---------------------------------------------------------------------------
# spinor-valued linear forms


def plus_lower(vec) -> HarmonicPolynomial:
    """``u^{+a} v_a`` for a lower-index spinor ``v`` (entries may be arrays)."""
    return HarmonicPolynomial.linear(plus=list(vec))


def minus_lower(vec) -> HarmonicPolynomial:
    """``u^{-a} v_a``."""
    return HarmonicPolynomial.linear(minus=list(vec))


def plus_upper(vec) -> HarmonicPolynomial:
    """``u^+_a v^a`` with ``u^+_a = eps_{ab} u^{+b}``."""
    vec = np.asarray(vec)
    coeffs = np.tensordot(EPS_LOWER.T, vec, axes=(1, 0))
    return HarmonicPolynomial.linear(plus=list(coeffs))


def minus_upper(vec) -> HarmonicPolynomial:
    """``u^-_a v^a`` with ``u^-_a = eps_{ba} u^{-b}``."""
    vec = np.asarray(vec)
    coeffs = np.tensordot(EPS_LOWER, vec, axes=(1, 0))
    return HarmonicPolynomial.linear(minus=list(coeffs))
