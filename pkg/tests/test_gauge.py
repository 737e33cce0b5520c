import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from harmtwist.gauge import (
    GaugeField,
    StepTooLarge,
    block_norm,
    bpst_connection,
    bpst_density,
    bpst_density_closed_form,
    chern_density,
    chern_density_cartesian,
    curvature,
    field_strength_cartesian,
    stretched_grid,
    topological_charge,
)

points = arrays(np.float64, 4, elements=st.floats(-3, 3))


def test_bpst_vanishes_at_origin():
    np.testing.assert_array_equal(bpst_connection(np.zeros(4)).components, 0)


def test_bpst_decays_like_inverse_radius():
    d = np.array([0.2, 0.4, -0.8, 0.4])
    a1 = np.abs(bpst_connection(1e3 * d).cartesian()).max()
    a2 = np.abs(bpst_connection(2e3 * d).cartesian()).max()
    assert a1 / a2 == pytest.approx(2.0, rel=1e-5)


@given(x=points, rho=st.floats(0.3, 3))
def test_bpst_is_su2_valued(x, rho):
    assert bpst_connection(x, rho).algebra_residual() < 1e-12


def test_bpst_rejects_bad_rho():
    with pytest.raises(ValueError):
        bpst_connection(np.ones(4), 0.0)


def test_flat_field_has_no_curvature():
    flat = lambda y: GaugeField(np.zeros((2, 2, 2, 2), dtype=complex), y)  # noqa: E731
    f = curvature(flat, np.ones(4))
    assert block_norm(f.f_undotted) == 0 and block_norm(f.f_dotted) == 0
    assert chern_density(f) == 0


def test_bpst_self_dual_at_origin():
    f = curvature(lambda y: bpst_connection(y, 1.0), np.zeros(4))
    assert block_norm(f.f_dotted) < 1e-6
    assert block_norm(f.f_undotted) > 0.1


@settings(max_examples=15)
@given(x=points)
def test_bpst_curvature_symmetric_and_self_dual(x):
    f = curvature(lambda y: bpst_connection(y, 1.0), x)
    assert f.symmetry_residual() < 1e-6
    assert f.self_duality_ratio() < 1e-5


def test_peak_density():
    assert bpst_density(np.zeros(4)) == pytest.approx(6 / math.pi**2, rel=1e-9)


def test_density_falls_sixteenfold_at_rho():
    x = np.array([0.5, 0.5, 0.5, 0.5])
    assert bpst_density(np.zeros(4)) / bpst_density(x) == pytest.approx(16.0, rel=1e-7)


@settings(max_examples=15)
@given(x=points, rho=st.floats(0.5, 2))
def test_density_matches_closed_form(x, rho):
    expected = bpst_density_closed_form(np.linalg.norm(x), rho)
    assert bpst_density(x, rho) == pytest.approx(expected, rel=1e-7, abs=1e-12)


def test_spinor_and_cartesian_densities_agree(rng):
    for _ in range(5):
        x = rng.normal(size=4)
        f_cart, _ = field_strength_cartesian(lambda y: bpst_connection(y), x)
        assert chern_density_cartesian(f_cart) == pytest.approx(bpst_density(x), rel=1e-9)


def test_density_gauge_invariant(rng):
    from scipy.stats import unitary_group

    g = unitary_group.rvs(2, random_state=1)
    g = g / np.sqrt(np.linalg.det(g))
    x = rng.normal(size=4)
    rotated = chern_density(curvature(lambda y: bpst_connection(y).conjugated(g), x))
    assert rotated == pytest.approx(bpst_density(x), rel=1e-9)


def test_curvature_step_guard():
    with pytest.raises(StepTooLarge):
        curvature(lambda y: bpst_connection(y, 0.05), np.full(4, 0.01), h=0.1)


def test_stretched_grid_endpoints_and_jacobian():
    r, jac = stretched_grid(10.0, 200)
    assert r[0] == 0 and r[-1] == pytest.approx(10.0)
    np.testing.assert_allclose(np.gradient(r, 1 / 200)[1:-1], jac[1:-1], rtol=1e-3)


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_topological_charge_is_one(rho):
    assert topological_charge(rho, 100 * rho, 4000) == pytest.approx(1.0, abs=1e-4)


def test_truncated_charge_monotone():
    qs = [topological_charge(1.0, r, 400) for r in (0.5, 1.0, 2.0)]
    assert qs[0] < qs[1] < qs[2] < 1.0
    # int_0^1 of the profile: 1 - (1 + 3 s)/(1 + s)^3 at s = r^2/rho^2 = 1
    assert qs[1] == pytest.approx(0.5, abs=1e-6)


def test_charge_of_closed_form_density():
    q = topological_charge(1.0, 100.0, 4000, density=lambda y: bpst_density_closed_form(np.linalg.norm(y)))
    assert q == pytest.approx(1 - (1 + 3e4) / (1 + 1e4) ** 3, abs=1e-8)
