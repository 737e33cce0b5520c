import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from harmtwist.report import VerificationReport
from harmtwist.verify import (
    SIGMA,
    SUITE_GROUPS,
    GridTooCoarse,
    RadialProfile,
    biharmonic_profile,
    biharmonic_radial,
    fd_weights,
    offaxis_audit,
    radial_laplacian,
    run_identity_suite,
    theorem_profile,
    uniform_profile,
    verify_theorem,
)

r_sym = sp.symbols("r", positive=True)


def radial_laplacian_symbolic(f):
    return sp.diff(f, r_sym, 2) + 3 * sp.diff(f, r_sym) / r_sym


def biharmonic_symbolic(f):
    return sp.simplify(radial_laplacian_symbolic(radial_laplacian_symbolic(f)))


def test_symbolic_oracle_values():
    log_bih = biharmonic_symbolic(sp.log(1 + r_sym**2))
    assert sp.simplify(log_bih + 96 / (1 + r_sym**2) ** 4) == 0
    assert biharmonic_symbolic(r_sym**4) == 192
    assert biharmonic_symbolic(r_sym**2) == 0


def test_fornberg_weights_central():
    w = fd_weights(0.0, [-2.0, -1.0, 0.0, 1.0, 2.0], 2)
    np.testing.assert_allclose([v[2] for v in w], [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12], atol=1e-14)
    np.testing.assert_allclose([v[1] for v in w], [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12], atol=1e-14)


def test_fornberg_weights_mpmath():
    with mpmath.workdps(30):
        nodes = [mpmath.mpf(k) for k in range(-3, 4)]
        w = fd_weights(mpmath.mpf(0), nodes, 2)
        assert abs(w[3][2] + mpmath.mpf(49) / 18) < mpmath.mpf(10) ** -28


def test_profile_validation():
    with pytest.raises(ValueError):
        RadialProfile([0, 1, 2, 3], [0, 1, 2, 3])
    with pytest.raises(ValueError):
        RadialProfile([0, 1, 1, 2, 3], [0] * 5)
    with pytest.raises(ValueError):
        RadialProfile([0, 1, 2], [0, 1])


def test_quadratic_laplacian_and_biharmonic():
    p = uniform_profile(lambda r: r * r, 2.0, 21)
    lap = radial_laplacian(p.r_values, p.samples)
    assert all(v == pytest.approx(8.0, abs=1e-10) for v in lap if v is not None)
    for r in (0.0, 0.5, 1.0):
        assert biharmonic_radial(p, r) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("r", [0.0, 0.3, 1.0])
def test_quartic_biharmonic(r):
    p = uniform_profile(lambda x: x**4, 2.0, 41)
    assert biharmonic_radial(p, r) == pytest.approx(192.0, rel=1e-9)


def test_log_biharmonic_at_origin():
    p = uniform_profile(lambda r: math.log1p(r * r), 8.0, 801)
    assert biharmonic_radial(p, 0.0) == pytest.approx(-96.0, rel=1e-5)


def test_grid_too_coarse():
    p = uniform_profile(lambda r: math.log1p(r * r), 8.0, 41)
    with pytest.raises(GridTooCoarse):
        biharmonic_radial(p, 0.0)


def test_non_node_and_boundary_rejected():
    p = uniform_profile(lambda r: r**4, 1.0, 11)
    with pytest.raises(ValueError):
        biharmonic_radial(p, 0.05)
    with pytest.raises(ValueError):
        biharmonic_radial(p, 1.0)


def _max_error(n, accuracy):
    with mpmath.workdps(30):
        p = uniform_profile(lambda r: mpmath.log1p(r * r), 4.0, n, dps=30)
        b = biharmonic_profile(p, accuracy)
    errs = [abs(float(v) + 96 / (1 + float(r) ** 2) ** 4) for r, v in zip(p.r_values, b) if v is not None and r <= 2]
    return max(errs)


@pytest.mark.parametrize("accuracy", [4, 6])
def test_stencil_convergence_order(accuracy):
    ratio = _max_error(81, accuracy) / _max_error(161, accuracy)
    assert ratio >= 8


@settings(max_examples=10)
@given(c=st.floats(-3, 3), rho=st.floats(0.5, 2.0))
def test_biharmonic_linear_in_samples(c, rho):
    p = uniform_profile(lambda r: c * math.log1p((r / rho) ** 2) + r**4, 4 * rho, 201)
    q = uniform_profile(lambda r: math.log1p((r / rho) ** 2), 4 * rho, 201)
    i = 50
    lhs = biharmonic_profile(p)[i]
    rhs = c * biharmonic_profile(q)[i] + 192
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_anchor_sign():
    prof = theorem_profile(1.0, r_max=1.0, n=51, t_source="analytic")
    assert prof.density[0] == pytest.approx(6 / math.pi**2, rel=1e-9)
    assert SIGMA * prof.biharmonic_t[0] == pytest.approx(6 / math.pi**2, rel=1e-6)


def test_verify_theorem_default():
    report = verify_theorem()
    assert report.passed, report.failures()
    assert report.metadata["points_series"] == 394


def test_series_order_30_truncation_visible_at_splice():
    # the order-30 remainder near r = 0.8 rho spoils the fourth derivative
    prof = theorem_profile(1.0, order=30)
    assert prof.residual[prof.from_series].max() > 1e-3
    clear = prof.r > 1.2  # stencils no longer reach into the series region
    assert prof.residual[clear].max() < 1e-6


def test_scale_covariance():
    p1 = theorem_profile(1.0, t_source="analytic")
    p2 = theorem_profile(2.0, t_source="analytic")
    np.testing.assert_allclose(p2.r, 2 * p1.r)
    np.testing.assert_allclose(p2.residual, p1.residual, atol=1e-9)


def test_theorem_rejects_unknown_source():
    with pytest.raises(ValueError):
        theorem_profile(t_source="exact")


def test_offaxis_audit():
    assert offaxis_audit().passed


def test_identity_suite_passes():
    report = run_identity_suite(seed=0)
    assert report.passed, report.failures()
    assert report.metadata["seed"] == 0


def test_identity_suite_deterministic():
    groups = ("spinor", "harmonic", "determinant")
    assert run_identity_suite(3, groups).to_json() == run_identity_suite(3, groups).to_json()


def test_identity_suite_empty():
    report = run_identity_suite(groups=())
    assert report.checks == []
    assert VerificationReport.from_json(report.to_json()).to_dict() == report.to_dict()


def test_identity_suite_rejects_unknown_group():
    with pytest.raises(ValueError):
        run_identity_suite(groups=("nope",))


def test_fault_localization():
    report = run_identity_suite(seed=0, corrupt_epsilon=True)
    failed = {c.name.split(":")[0] for c in report.failures()}
    assert {"prepotential", "theorem"} <= failed
    algebra = [c for c in report.checks if c.name.startswith(("sl2", "harmonic", "spinor", "determinant"))]
    assert algebra and all(c.passed for c in algebra)
    assert "reconstruction vs BPST" in " ".join(c.name for c in report.failures())


def test_suite_groups_cover_all_modules():
    assert SUITE_GROUPS == ("spinor", "harmonic", "gauge", "prepotential", "determinant", "theorem")
