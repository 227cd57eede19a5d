from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chazy_lab import jet as J
from chazy_lab import ode
from chazy_lab.jet import Jet
from chazy_lab.ode import Mobius, normalised

ORDER = 8
POINTS = [0.3 + 0.2j, -0.7 + 0.4j, 1.6 - 0.3j, 0.05 + 1.1j, -1.4 - 0.8j]


def chazy(k, y, x0, order=ORDER):
    return normalised(ode.chazy_terms(k, y(Jet.variable(x0, order))))


def cplx(rng, scale=1.0):
    return complex(*rng.normal(scale=scale, size=2))


def test_chazy_param_values():
    assert ode.chazy_param(Fr(2, 3)) == Fr(2, 3)
    assert float(4 / (36 - Fr(3, 2) ** 2)) == pytest.approx(16 / 135)


@pytest.mark.parametrize("k", [2, Fr(2, 3), 3, Fr(3, 2), 5])
def test_zero_solves_every_equation(k):
    assert ode.chazy_residual(k, Jet.constant(0, 0.4, 5)) == 0


def test_three_poles_k2():
    y = lambda X: -2 * (1 / X + 1 / (X - 1) + 1 / (X + 1))
    rng = np.random.default_rng(1)
    for _ in range(20):
        assert chazy(2, y, cplx(rng) + 0.1j) < 1e-12


def test_minus_six_over_x_k_two_thirds():
    for x0 in POINTS:
        assert chazy(Fr(2, 3), lambda X: -6 / X, x0) < 1e-13


def test_wrong_k_is_detected():
    y = lambda X: -2 * (1 / X + 1 / (X - 1) + 1 / (X + 1))
    assert chazy(3, y, 0.3 + 0.2j) > 1e-3


def test_cubic_solves_linear_fourth_order():
    rng = np.random.default_rng(2)
    c = [cplx(rng) for _ in range(4)]
    for x0 in POINTS:
        X = Jet.variable(x0, ORDER)
        f = ((c[0] * X + c[1]) * X + c[2]) * X + c[3]
        assert abs(ode.intc_residual(2, f)) < 1e-12


def test_constrained_even_quartic():
    c = 1.3 - 0.4j
    e = -c * c / 12
    for x0 in POINTS:
        X = Jet.variable(x0, ORDER)
        assert normalised(ode.intc_terms(3, X**4 + c * X**2 + e)) < 1e-13


def test_integrating_factor_from_k2_solution():
    # f = exp((2/(k-6)) int y) for y = -2/x - 2/(x+1)
    for x0 in POINTS:
        X = Jet.variable(x0, ORDER)
        y = -2 / X - 2 / (X + 1)
        f = J.exp(float(Fr(2, 2 - 6)) * y.integral())
        # f is the quadratic x(x+1), so every term vanishes
        assert abs(ode.intc_residual(2, f)) < 1e-12


def test_k3_intc_equals_chazy():
    q = ode.QuarticCoeffs(1, 0, 1.3, 0, -1.3**2 / 12)
    y = ode.general_solution_k3(q)
    X = Jet.variable(0.4 + 0.3j, ORDER)
    assert normalised(ode.chazy_terms(3, y(X))) < 1e-12


def test_parabola_solves_sixth_order():
    assert ode.ode6_residual(Jet.variable(0.7, ORDER) ** 2) == 0


@pytest.mark.parametrize("m", [-1, Fr(1, 3), Fr(2, 3), 2])
def test_powers_solve_sixth_order(m):
    for x0 in POINTS:
        F = J.power(Jet.variable(x0, ORDER), float(m))
        assert normalised(ode.ode6_terms(F)) < 1e-12


def test_two_point_product_solves_sixth_order():
    rng = np.random.default_rng(3)
    for _ in range(10):
        B, C = cplx(rng), cplx(rng)
        x0 = cplx(rng) + 2.5
        X = Jet.variable(x0, ORDER)
        F = J.power(X + B, 1 / 3) * J.power(X + C, 2 / 3)
        assert normalised(ode.ode6_terms(F)) < 1e-11


def test_generic_function_fails_sixth_order():
    F = J.exp(Jet.variable(0.3, ORDER))
    assert normalised(ode.ode6_terms(F)) > 1e-3


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_sixth_order_affine_gauge(a, b):
    X = Jet.variable(0.6 + 0.2j, ORDER)
    F = J.power(X + 2, 1 / 3) * J.power(X - 1, 2 / 3)
    r0 = ode.ode6_residual(F)
    r1 = ode.ode6_residual(F + a + b * X)
    scale = sum(abs(t) for t in ode.ode6_terms(F))
    assert abs(r0 - r1) <= 1e-12 * scale


def test_quadratic_solves_dual_equation():
    X = Jet.variable(0.3, ORDER)
    assert ode.noth_residual(2 * X**2 - X + 4) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2), min_size=9, max_size=9))
def test_dual_equation_offset(c):
    # the y-form on a jet equals the H-form on its derivative
    H = Jet(c + [0.0], 0.2)
    r_y = ode.noth_residual(H, "y")
    r_h = ode.noth_residual(H.derivative(), "H")
    scale = 1 + sum(abs(t) for t in ode.noth_terms(H, "y"))
    assert abs(r_h - r_y) <= 1e-12 * scale


def test_identity_action():
    y = lambda X: -2 / X - 2 / (X + 1)
    out = ode.sl2_apply(Mobius.identity(), y, 0.4, ORDER)
    assert out.close_to(y(Jet.variable(0.4, ORDER)))


def test_inversion_exchanges_poles():
    b = 1.7 - 0.3j
    for x0 in POINTS:
        out = ode.sl2_apply(ode.inversion(b), lambda X: -10 / (3 * X), x0, ORDER)
        X = Jet.variable(x0, ORDER)
        assert np.allclose(out.coeffs, (-8 / (3 * X)).coeffs, rtol=1e-12)


def test_quarter_turn_of_zero():
    for x0 in POINTS:
        out = ode.sl2_apply(ode.quarter_turn(), lambda X: 0 * X, x0, ORDER)
        X = Jet.variable(x0, ORDER)
        assert np.allclose(out.coeffs, (-6 / X).coeffs, rtol=1e-12)


def test_pole_merger():
    c, e, f = 0.8 + 0.1j, 0.6, -0.9 + 0.2j
    y = lambda X: -8 / (3 * (X + e)) - 10 / (3 * (X + f))
    for x0 in POINTS:
        out = ode.sl2_apply(ode.pole_merger(c, e, f), y, x0, ORDER)
        X = Jet.variable(x0, ORDER)
        assert np.allclose(out.coeffs, (-10 / (3 * X)).coeffs, rtol=1e-10)


def test_pole_merger_needs_distinct_poles():
    with pytest.raises(ode.CoincidentPoles):
        ode.pole_merger(1, 0.5, 0.5)


def test_mobius_determinant_checked():
    with pytest.raises(ValueError):
        Mobius(1, 1, 1, 1)


@pytest.mark.parametrize("seed", range(10))
def test_transport_preserves_solutions(seed):
    rng = np.random.default_rng(seed)
    g = Mobius.random(rng)
    y = ode.general_solution_k2(cplx(rng), cplx(rng), cplx(rng))
    for _ in range(5):
        x0 = cplx(rng)
        try:
            out = ode.sl2_apply(g, y, x0, ORDER)
        except (ode.PoleOfAction, J.JetError):
            continue
        assert normalised(ode.chazy_terms(2, out)) < 1e-8


@pytest.mark.parametrize("seed", range(10))
def test_parabola_weight_transform(seed):
    rng = np.random.default_rng(seed)
    g = Mobius.random(rng)
    x0 = cplx(rng)
    F = lambda X: X * X
    out = ode.weight_transform(g, F, -1, x0, ORDER)
    closed = (g.a * x0 + g.b) ** 2 / (g.c * x0 + g.d)
    assert out.value == pytest.approx(closed, rel=1e-12)
    assert normalised(ode.ode6_terms(out)) < 1e-10


def test_identity_weight_transform():
    F = lambda X: J.exp(X)
    out = ode.weight_transform(Mobius.identity(), F, -1, 0.3, ORDER)
    assert out.close_to(J.exp(Jet.variable(0.3, ORDER)))


@pytest.mark.parametrize("seed", range(20))
def test_second_derivative_law(seed):
    rng = np.random.default_rng(100 + seed)
    g = Mobius.random(rng)
    x0 = cplx(rng, 0.5)
    F = lambda X: J.exp(0.3 * X) + X**3
    out = ode.weight_transform(g, F, -1, x0, 4)
    gx = g(x0)
    F2 = F(Jet.variable(gx, 4)).deriv(2)
    expect = (g.c * x0 + g.d) ** -3 * F2
    assert abs(out.deriv(2) - expect) <= 1e-10 * max(1.0, abs(expect))


def test_parabola_self_dual():
    X = Jet.variable(0.8, ORDER)
    t, H = ode.legendre_dual(X, X * X / 2)
    assert np.allclose(t.coeffs, X.truncate(ORDER - 1).coeffs)
    assert np.allclose(H.coeffs, (X * X / 2).truncate(ORDER - 1).coeffs)


@pytest.mark.parametrize("seed", range(50))
def test_duality_involution_on_polynomials(seed):
    rng = np.random.default_rng(seed)
    c = [cplx(rng) for _ in range(5)]
    X = Jet.variable(cplx(rng, 0.3), 10)
    F = sum((ci * X**i for i, ci in enumerate(c)), 0 * X)
    if abs(F.deriv(2)) < 0.1:
        return
    t, H = ode.legendre_dual(X, F)
    x2, F2 = ode.legendre_dual(t, H)
    # back in the original parameter: x2 = x and F2 = F, compared through
    # fourth order since the top coefficients lose digits to differentiation
    assert np.allclose(x2.coeffs[:5], X.coeffs[:5], atol=1e-9)
    assert np.allclose(F2.coeffs[:5], F.coeffs[:5], rtol=1e-9, atol=1e-9)


def test_dual_needs_curvature():
    X = Jet.variable(0.3, ORDER)
    with pytest.raises(ode.DegenerateDual):
        ode.legendre_dual(X, 2 * X + 1)


def test_general_k2_unit_triple():
    y = ode.general_solution_k2(0, 1, -1)
    rng = np.random.default_rng(4)
    for _ in range(20):
        assert chazy(2, y, cplx(rng) + 0.05) < 1e-12


def test_general_k2_two_poles():
    y = ode.general_solution_k2(0.3, -1.2j)
    for x0 in POINTS:
        assert chazy(2, y, x0) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=3, max_size=3, unique=True))
def test_general_k2_random(poles):
    if min(abs(a - b) for i, a in enumerate(poles) for b in poles[:i]) < 0.1:
        return
    y = ode.general_solution_k2(*poles)
    x0 = sum(poles) / 3 + 0.37 + 0.41j
    if min(abs(x0 - p) for p in poles) < 0.2:
        return
    assert chazy(2, y, x0) < 1e-10


def test_coincident_poles_rejected():
    with pytest.raises(ode.CoincidentPoles):
        ode.general_solution_k2(1, 1, 2)


@pytest.mark.parametrize("seed", range(20))
def test_conic_roots(seed):
    rng = np.random.default_rng(seed)
    t = ode.conic_point(rng)
    assert abs(ode.conic_form(*t)) < 1e-12 * sum(abs(v) ** 2 for v in t)
    x0 = sum(t) / 3 + 0.3 + 0.2j
    X = Jet.variable(x0, ORDER)
    s = sum((1 / (X - ti) for ti in t), 0 * X)
    y3, y2 = -1.5 * s, -2 * s
    assert normalised(ode.chazy_terms(3, y3)) < 1e-10
    assert normalised(ode.chazy_terms(2, y2)) < 1e-10
    # the two solutions differ by the constant factor 3/4
    assert np.allclose(y3.coeffs, 0.75 * y2.coeffs, rtol=1e-14)


def test_even_quartic_slice():
    for c in (1.0, 0.5 + 0.5j, -2.0):
        y = ode.general_solution_k3(ode.QuarticCoeffs(1, 0, c, 0, -c * c / 12))
        for x0 in POINTS:
            assert chazy(3, y, x0) < 1e-12


def test_violated_constraint():
    q = ode.QuarticCoeffs(1, 0, 1, 0, 1)
    with pytest.raises(ode.ConstraintViolated):
        ode.general_solution_k3(q)
    y = ode.unchecked_solution_k3(q)
    assert chazy(3, y, 0.1 + 0.2j) > 1e-3


def test_quartic_from_roots():
    q = ode.QuarticCoeffs.from_roots([1, 2, 3, 4])
    assert np.allclose(q.as_list(), [1, -10, 35, -50, 24])
