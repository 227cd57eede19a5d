import cmath
from fractions import Fraction as Fr

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chazy_lab import jet as J
from chazy_lab.hyp2f1 import (
    HypParams,
    NoConvergence,
    PolarParameter,
    hyp2f1,
    hyp2f1_jet,
    hypergeom_residual,
    hypergeom_terms,
    polynomial_coefficients,
    termination_degree,
)
from chazy_lab.jet import Jet
from chazy_lab.ode import normalised
from oracles import ORACLE_POINTS, catalogue_triples, hyp2f1_by_integration


def test_origin_is_one():
    assert hyp2f1(HypParams(0.3, 1.7, 2.2), 0) == 1


def test_terminating_linear():
    p = HypParams(Fr(-1), Fr(-2, 3), Fr(1, 3))
    assert polynomial_coefficients(p) == [1, 2]
    for tau in (0.3, -0.8 + 0.2j, 4.0):
        assert hyp2f1(p, tau) == pytest.approx(1 + 2 * tau, abs=1e-15)


def test_geometric_series():
    # 2F1(1, b; b; z) = 1/(1-z)
    for z in (0.4, -0.6j, 0.85 * cmath.exp(1j)):
        assert hyp2f1(HypParams(1, 0.37, 0.37), z) == pytest.approx(1 / (1 - z), rel=1e-13)


def test_binomial_series():
    # 2F1(-a, b; b; -z) = (1+z)^a
    for z in (0.3, 0.2 + 0.5j):
        assert hyp2f1(HypParams(-0.4, 1.3, 1.3), -z) == pytest.approx((1 + z) ** 0.4, rel=1e-13)


def test_against_integration_at_half():
    p = HypParams(Fr(1, 6), Fr(-1, 2), Fr(1, 3))
    ref = hyp2f1_by_integration(*p.as_tuple(), 0.5)
    assert abs(hyp2f1(p, 0.5) - ref) < 1e-10
    assert abs(ref - complex(mpmath.hyp2f1(1 / 6, -0.5, 1 / 3, 0.5))) < 1e-10


@pytest.mark.parametrize("triple", catalogue_triples(), ids=str)
def test_catalogue_triples_match_integration(triple):
    p = HypParams(*triple)
    for z in ORACLE_POINTS:
        ref = hyp2f1_by_integration(*triple, z)
        assert abs(hyp2f1(p, z) - ref) <= 1e-10 * max(1.0, abs(ref))


@pytest.mark.parametrize("triple", [t for t in catalogue_triples() if termination_degree(HypParams(*t)) is not None],
                         ids=str)
def test_terminating_series_exact(triple):
    p = HypParams(*triple)
    coeffs = polynomial_coefficients(p)
    assert all(isinstance(c, Fr) for c in coeffs)
    for z in (Fr(1, 3), Fr(-7, 5), Fr(2)):
        exact = sum(c * z**i for i, c in enumerate(coeffs))
        assert abs(hyp2f1(p, complex(z)) - float(exact)) <= 1e-14 * max(1.0, abs(float(exact)))


def test_terminating_series_uses_pochhammer_ratios():
    p = HypParams(Fr(-3), Fr(1, 2), Fr(5, 4))
    assert polynomial_coefficients(p) == [1, Fr(-6, 5), Fr(4, 5), Fr(-8, 39)]


def test_polar_parameter_rejected():
    with pytest.raises(PolarParameter):
        hyp2f1(HypParams(Fr(1, 2), Fr(1, 3), Fr(-2)), 0.2)


def test_outside_both_discs():
    with pytest.raises(NoConvergence):
        hyp2f1(HypParams(0.3, 0.2, 1.1), 1.5 + 1.5j)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.5, 0.9), st.floats(-3.1, 3.1), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0.2, 2.5))
def test_pfaff_agrees_with_direct(r, theta, a, b, c):
    # Pfaff is taken whenever |z/(z-1)| stays inside the disc
    z = r * cmath.exp(1j * theta)
    w = z / (z - 1)
    if abs(w) > 0.9:
        return
    p = HypParams(a, b, c)
    direct = hyp2f1(p, z)
    pfaff = (1 - z) ** (-a) * hyp2f1(HypParams(a, c - b, c), w)
    assert abs(direct - pfaff) <= 1e-11 * max(1.0, abs(direct))


def test_jet_order_zero_matches_value():
    p = HypParams(Fr(1, 6), Fr(5, 6), Fr(4, 3))
    assert hyp2f1_jet(p, 0.3, 0).value == hyp2f1(p, 0.3)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0.3, 2.5))
def test_jet_derivative_against_finite_difference(a, b, c):
    p = HypParams(a, b, c)
    h = 1e-4
    fd = (hyp2f1(p, 0.3 + h) - hyp2f1(p, 0.3 - h)) / (2 * h)
    d1 = hyp2f1_jet(p, 0.3, 2).deriv(1)
    assert abs(d1 - fd) <= 1e-7 * max(1.0, abs(fd))


@pytest.mark.parametrize("triple", catalogue_triples(), ids=str)
def test_jet_satisfies_equation(triple):
    p = HypParams(*triple)
    for z0 in (0.3, -0.4 + 0.2j, 0.6j):
        jet = hyp2f1_jet(p, z0, 4)
        assert normalised(hypergeom_terms(p, jet)) < 1e-10


def test_residual_of_constant_when_ab_zero():
    p = HypParams(0, 2.5, 1.5)
    assert hypergeom_residual(p, Jet.constant(1.0, 0.4, 3)) == 0


@pytest.mark.parametrize("triple", [t for t in catalogue_triples() if t[2].denominator != 1], ids=str)
def test_second_solution_satisfies_equation(triple):
    p = HypParams(*triple)
    q = p.second_solution()
    for z0 in (0.3, 0.25 + 0.3j):
        s = Jet.variable(z0, 4)
        z2 = J.power(s, 1 - p.c) * hyp2f1_jet(q, z0, 4)
        assert normalised(hypergeom_terms(p, z2)) < 1e-9
