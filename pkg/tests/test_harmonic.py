from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmtwist.harmonic import (
    ONE,
    U_MINUS,
    U_PLUS,
    ChargeMismatch,
    D0,
    Dmm,
    Dpp,
    HarmonicFrame,
    HarmonicMonomial,
    HarmonicPolynomial,
    NotInImage,
    commutator_check,
    dpp_kernel,
    integrate,
    integrate_total_derivative_check,
    invert_Dpp,
    monomial_integral,
    monomials,
    quadrature_integrate,
)

P = HarmonicPolynomial


def gen(m):
    return P.monomial(m)


monos = st.tuples(*[st.integers(0, 3)] * 4).map(lambda t: HarmonicMonomial(*t))


@st.composite
def polys(draw, charge=None, max_terms=4):
    terms = {}
    for m in draw(st.lists(monos, min_size=1, max_size=max_terms)):
        if charge is not None:
            # shift minus powers to hit the requested charge when possible
            excess = m.charge - charge
            if excess > 0:
                m = HarmonicMonomial(m.p1, m.p2, m.q1 + excess, m.q2)
            elif excess < 0:
                m = HarmonicMonomial(m.p1 - excess, m.p2, m.q1, m.q2)
        terms[m] = draw(st.integers(-5, 5)) + 1j * draw(st.integers(-5, 5))
    return P(terms)


def test_monomial_charge_and_degree():
    m = HarmonicMonomial(2, 1, 0, 1)
    assert m.charge == 2 and m.degree == 4


def test_zero_coefficients_dropped():
    assert len(P({ONE: 0.0, U_PLUS[0]: 1.0})) == 1


def test_mixed_charge_flagged():
    f = gen(U_PLUS[0]) + gen(U_MINUS[0])
    assert not f.is_homogeneous and f.charge is None


def test_frame_constraints(rng):
    for _ in range(20):
        u = HarmonicFrame.random(rng)
        assert u.normalization_residual() < 1e-14
        assert u.reality_residual() < 1e-14


def test_dpp_on_generators():
    assert not Dpp(gen(U_PLUS[0])).terms
    assert Dpp(gen(U_MINUS[0])).terms == gen(U_PLUS[0]).terms


def test_dmm_on_generators():
    assert not Dmm(gen(U_MINUS[1])).terms
    assert Dmm(gen(U_PLUS[1])).terms == gen(U_MINUS[1]).terms


def test_bracket_examples():
    up1, um1 = gen(U_PLUS[0]), gen(U_MINUS[0])
    assert (Dpp(Dmm(up1)) - Dmm(Dpp(up1)) - up1).norm() == 0
    assert (D0(Dpp(um1)) - Dpp(D0(um1)) - 2 * up1).norm() == 0
    one = P.constant(1.0)
    for op in (Dpp, Dmm, D0):
        assert not op(one).terms


def test_commutator_check_to_degree_8():
    report = commutator_check(8)
    assert report.passed and report.metadata["monomials"] == 495
    assert all(c.residual == 0 for c in report.checks)


@given(m=monos)
def test_d0_measures_charge(m):
    f = gen(m)
    assert (D0(f) - m.charge * f).norm() == 0


@given(f=polys(), g=polys())
def test_dpp_leibniz(f, g):
    assert (Dpp(f * g) - (Dpp(f) * g + f * Dpp(g))).norm() < 1e-12


@given(f=polys())
def test_dpp_raises_charge_by_two(f):
    out = Dpp(f)
    assert out.charges <= {c + 2 for c in f.charges}


def test_integrate_constant():
    assert integrate(P.constant(1.0)) == 1


def test_integrate_u_plus_u_minus_pairs():
    vals = {(a, b): complex(integrate(gen(U_PLUS[a]) * gen(U_MINUS[b]))) for a in range(2) for b in range(2)}
    assert vals[0, 0] == 0 and vals[1, 1] == 0
    assert abs(vals[0, 1]) == pytest.approx(0.5)
    assert vals[0, 1] == -vals[1, 0]
    for (a, b), v in vals.items():
        q = complex(quadrature_integrate(gen(U_PLUS[a]) * gen(U_MINUS[b]), order=4))
        assert v == pytest.approx(q, abs=1e-14)


@given(m=monos.filter(lambda m: m.charge % 2))
def test_odd_charge_integrates_to_zero(m):
    assert monomial_integral(m) == 0


def test_exact_integration_with_fractions():
    f = P({HarmonicMonomial(2, 0, 0, 2): np.array(Fraction(1), dtype=object)})
    assert integrate(f) == Fraction(1, 3)


@given(f=polys(charge=0, max_terms=5))
def test_integration_matches_quadrature(f):
    assert complex(integrate(f)) == pytest.approx(complex(quadrature_integrate(f, order=8)), abs=1e-10)


@pytest.mark.parametrize(
    "f",
    [
        gen(HarmonicMonomial(0, 0, 1, 1)),
        gen(HarmonicMonomial(1, 0, 3, 0)),
        P.zero(),
    ],
    ids=["u-1 u-2", "(u-1)^2 u+1 u-1", "zero"],
)
def test_total_derivative_examples(f):
    assert integrate_total_derivative_check(f) == 0


@given(f=polys(charge=-2))
def test_total_derivative_vanishes(f):
    assert integrate_total_derivative_check(f) < 1e-12


def test_total_derivative_rejects_wrong_charge():
    with pytest.raises(ChargeMismatch):
        integrate_total_derivative_check(gen(U_PLUS[0]))


def test_invert_dpp_examples():
    y = gen(U_PLUS[0]) * gen(U_PLUS[1])
    assert (Dpp(invert_Dpp(y)) - y).norm() < 1e-14
    assert not invert_Dpp(P.zero()).terms


def test_invert_dpp_constant_not_in_image():
    with pytest.raises(NotInImage):
        invert_Dpp(P.constant(1.0))


def test_invert_dpp_degree_bound():
    with pytest.raises(NotInImage):
        invert_Dpp(gen(HarmonicMonomial(3, 1, 0, 0)), max_degree=2)


def test_invert_dpp_mixed_charge():
    with pytest.raises(ChargeMismatch):
        invert_Dpp(gen(U_PLUS[0]) * gen(U_PLUS[1]) + gen(U_PLUS[0]) ** 4)


@given(f=polys(charge=0, max_terms=5))
def test_invert_dpp_round_trip(f):
    y = Dpp(f)
    x = invert_Dpp(y)
    assert (Dpp(x) - y).norm() < 1e-12 * max(1.0, y.norm())


def test_invert_dpp_high_degree(rng):
    terms = {m: rng.normal() for m in monomials(16) if m.charge == 0 and m.degree == 16}
    y = Dpp(P(terms))
    assert (Dpp(invert_Dpp(y)) - y).norm() < 1e-12 * y.norm()


def test_kernel_is_annihilated():
    for charge, degree in ((0, 0), (2, 2), (0, 4), (4, 4)):
        for k in dpp_kernel(charge, degree):
            assert Dpp(k).norm() < 1e-12


def test_kernel_counts():
    # u^{+a}u^{+b} (3 symmetric products); nothing of negative charge is annihilated
    assert len(dpp_kernel(2, 2)) == 3
    assert len(dpp_kernel(-2, 2)) == 0


@given(f=polys())
def test_canonical_preserves_values(f):
    u = HarmonicFrame.random(np.random.default_rng(5))
    np.testing.assert_allclose(f.canonical().evaluate(u), f.evaluate(u), atol=1e-10)


def test_casimir_shell_rewrites_to_one():
    shell = gen(HarmonicMonomial(0, 1, 1, 0)) - gen(HarmonicMonomial(1, 0, 0, 1))
    assert shell.canonical().terms == P.constant(1.0).terms


def test_matrix_coefficients_and_commutator(rng):
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    f = P.linear(plus=[a, b])
    g = P.linear(minus=[b, a])
    comm = f.commutator(g)
    u = HarmonicFrame.random(rng)
    fv, gv = f.evaluate(u), g.evaluate(u)
    np.testing.assert_allclose(comm.evaluate(u), fv @ gv - gv @ fv, atol=1e-12)
