import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from harmtwist import spinor
from harmtwist.harmonic import HarmonicFrame
from harmtwist.spinor import (
    EPS_LOWER,
    EPS_UPPER,
    SIGMA,
    Epsilon,
    cartesian_from_spinor,
    lower_index,
    project,
    project_lower,
    raise_index,
    spinor_from_cartesian,
    to_bispinor,
    use_epsilon,
)

vectors = arrays(np.float64, 4, elements=st.floats(-10, 10))
spinors = arrays(np.complex128, 2, elements=st.complex_numbers(max_magnitude=10))


def test_epsilon_relations():
    assert EPS_LOWER[0, 1] == 1
    np.testing.assert_array_equal(EPS_UPPER, -EPS_LOWER)
    np.testing.assert_array_equal(EPS_UPPER, EPS_LOWER.T)
    np.testing.assert_array_equal(EPS_UPPER @ EPS_LOWER, np.eye(2))  # eps^{ab} eps_{bc} = delta^a_c


@pytest.mark.parametrize("kind", ["dotted", "undotted"])
@pytest.mark.parametrize("chirality", ["+", "-"])
@given(s=spinors)
def test_raise_lower_round_trip(kind, chirality, s):
    np.testing.assert_allclose(raise_index(lower_index(s, kind, chirality), kind, chirality), s)
    np.testing.assert_allclose(lower_index(raise_index(s, kind, chirality), kind, chirality), s)


def test_lower_then_raise_basis_vector():
    np.testing.assert_array_equal(raise_index(lower_index([1.0, 0.0])), [1.0, 0.0])


def test_lower_u_plus_by_hand():
    # u^+_adot = u^{+bdot} eps_{adot bdot}: u^+_1 = eps_{12} u^{+2} = 0, u^+_2 = eps_{21} u^{+1} = -1
    np.testing.assert_array_equal(lower_index([1.0, 0.0], "dotted", "+"), [0.0, -1.0])


def test_chirality_sign_pattern_on_basis():
    for e in np.eye(2):
        plus = lower_index(e, "dotted", "+")
        minus = lower_index(e, "dotted", "-")
        np.testing.assert_array_equal(plus, -minus)


def test_to_bispinor_zero():
    np.testing.assert_array_equal(to_bispinor(np.zeros(4)).entries, np.zeros((2, 2)))


def test_to_bispinor_rejects_wrong_shape():
    with pytest.raises(ValueError):
        to_bispinor([1.0, 2.0, 3.0])


def test_bispinor_against_symbolic_pauli_oracle():
    x1, x2, x3, x4 = sp.symbols("x1:5", real=True)
    oracle = sp.Matrix([[x4 + sp.I * x3, sp.I * x1 + x2], [sp.I * x1 - x2, x4 - sp.I * x3]])
    vals = {x1: 0.3, x2: -1.1, x3: 2.0, x4: 0.7}
    expected = np.array(oracle.subs(vals).evalf(), dtype=complex)
    np.testing.assert_allclose(to_bispinor([0.3, -1.1, 2.0, 0.7]).entries, expected)


@given(x=vectors)
def test_bispinor_reality_and_norm(x):
    b = to_bispinor(x)
    assert b.reality_residual() < 1e-13
    assert b.norm2() == pytest.approx(x @ x, rel=1e-12, abs=1e-12)
    np.testing.assert_allclose(b.to_vector(), x, atol=1e-12)


def test_unit_vector_projection_identity(rng):
    e = rng.normal(size=4)
    e /= np.linalg.norm(e)
    b = to_bispinor(e)
    for _ in range(100):
        u = HarmonicFrame.random(rng)
        assert project_lower(b, u, "+") @ project(b, u, "-") == pytest.approx(1.0, abs=1e-13)


@given(x=vectors, seed=st.integers(0, 2**32 - 1))
def test_plus_projection_is_null(x, seed):
    u = HarmonicFrame.random(np.random.default_rng(seed))
    b = to_bispinor(x)
    assert abs(project_lower(b, u, "+") @ project(b, u, "+")) < 1e-12 * (1 + x @ x)


def test_projection_zero():
    u = HarmonicFrame.from_plus([1.0, 0.0])
    np.testing.assert_array_equal(project(to_bispinor(np.zeros(4)), u, "+"), [0, 0])


@given(x=vectors, seed=st.integers(0, 2**32 - 1))
def test_projection_reality(x, seed):
    u = HarmonicFrame.random(np.random.default_rng(seed))
    b = to_bispinor(x)
    np.testing.assert_allclose(np.conj(project_lower(b, u, "+")), project(b, u, "-"), atol=1e-12)


@given(x=vectors, seed=st.integers(0, 2**32 - 1))
def test_projection_contraction_is_norm(x, seed):
    u = HarmonicFrame.random(np.random.default_rng(seed))
    b = to_bispinor(x)
    assert project_lower(b, u, "+") @ project(b, u, "-") == pytest.approx(x @ x, rel=1e-12, abs=1e-12)


def test_cartesian_spinor_round_trip(rng):
    a = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    np.testing.assert_allclose(cartesian_from_spinor(spinor_from_cartesian(a)), a, atol=1e-14)


def test_sigma_trace_orthogonality():
    gram = np.einsum("mab,nab->mn", spinor.SIGMA_LOWER, SIGMA)
    np.testing.assert_allclose(gram, 2 * np.eye(4), atol=1e-15)


def test_use_epsilon_restores_convention():
    original = spinor.EPSILON
    with use_epsilon(Epsilon.corrupted()):
        assert spinor.EPSILON.dotted_lower[0, 1] == -1
    assert spinor.EPSILON is original
