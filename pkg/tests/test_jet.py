import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chazy_lab import jet as J
from chazy_lab.jet import Jet

small = st.floats(-2.0, 2.0, allow_nan=False)
cplx = st.builds(complex, small, small)


def coeff_lists(order=6, lead=None):
    return st.lists(cplx, min_size=order + 1, max_size=order + 1)


def test_square_of_variable():
    x = Jet.variable(2.0, 2)
    assert np.allclose((x * x).coeffs, [4, 4, 1])


def test_geometric_series():
    x = Jet.variable(0.0, 5)
    assert np.allclose((1 / (1 - x)).coeffs, [1] * 6)


def test_self_division_is_unit():
    a = Jet([2 + 1j, 0.3, -1.2, 0.5], 0.1)
    assert np.allclose((a / a).coeffs, [1, 0, 0, 0])


def test_exp_of_zero():
    z = Jet.constant(0.0, 0.0, 4)
    assert np.allclose(J.exp(z).coeffs, [1, 0, 0, 0, 0])


def test_binomial_cube_root():
    x = Jet.variable(1.0, 3)
    assert np.allclose(J.power(x, 1 / 3).coeffs, [1, 1 / 3, -1 / 9, 5 / 81])


def test_compose_square_with_shift():
    sq = Jet.variable(1.0, 2) * Jet.variable(1.0, 2)
    inner = Jet.variable(0.0, 2) + 1
    assert np.allclose(J.compose(sq, inner).coeffs, [1, 2, 1])


def test_revert_x_plus_x2():
    x = Jet.variable(0.0, 4)
    r = J.revert(x + x * x)
    assert np.allclose(r.coeffs, [0, 1, -1, 2, -5])


def test_revert_identity():
    x = Jet.variable(0.7, 6)
    assert np.allclose(J.revert(x).coeffs, x.coeffs)


def test_revert_needs_nonzero_derivative():
    x = Jet.variable(0.0, 4)
    with pytest.raises(J.NonInvertibleSeries):
        J.revert(x * x)


def test_compose_orders_must_match():
    with pytest.raises(J.JetError):
        J.compose(Jet.variable(0.0, 4), Jet.variable(0.0, 6))


def test_division_by_zero_series():
    with pytest.raises(J.DivisionByZeroSeries):
        Jet.variable(0.0, 3).reciprocal()


def test_log_branch_shift():
    a = Jet.variable(-1.0 + 0.1j, 3)
    shifted = J.log(a, J.BranchSpec(log_index=1))
    assert shifted.value == pytest.approx(J.log(a).value + 2j * math.pi)
    assert np.allclose(shifted.coeffs[1:], J.log(a).coeffs[1:])


def fd_deriv(f, z0, k, h):
    """k-th central difference with two Richardson steps (h, h/2, h/4)."""
    def central(step):
        acc = sum((-1) ** j * math.comb(k, j) * f(z0 + (k / 2 - j) * step) for j in range(k + 1))
        return acc / step**k
    d1, d2, d3 = central(h), central(h / 2), central(h / 4)
    e1, e2 = (4 * d2 - d1) / 3, (4 * d3 - d2) / 3
    return (16 * e2 - e1) / 15


STEPS = ((1, 1e-2), (2, 2e-2), (3, 3e-2), (4, 4e-2))


@pytest.mark.parametrize("name,scalar", [
    ("exp", cmath.exp), ("log", cmath.log), ("sqrt", cmath.sqrt),
    ("sin", cmath.sin), ("cos", cmath.cos), ("tan", cmath.tan),
])
def test_elementary_against_finite_differences(name, scalar):
    z0 = 0.8 + 0.3j
    j = J.apply_elementary(name, Jet.variable(z0, 4))
    for k, h in STEPS:
        fd = fd_deriv(scalar, z0, k, h)
        assert abs(j.deriv(k) - fd) <= 1e-6 * max(1.0, abs(fd))


def test_compose_against_finite_differences():
    z0 = 0.4 - 0.2j
    inner = J.sin(Jet.variable(z0, 4)) + 0.5
    outer = J.exp(Jet.variable(inner.value, 4))
    c = J.compose(outer, inner)
    f = lambda z: cmath.exp(cmath.sin(z) + 0.5)
    for k, h in STEPS:
        fd = fd_deriv(f, z0, k, h)
        assert abs(c.deriv(k) - fd) <= 1e-7 * max(1.0, abs(fd))


@settings(max_examples=60, deadline=None)
@given(coeff_lists(), coeff_lists(), coeff_lists())
def test_distributive(a, b, c):
    A, B, C = Jet(a), Jet(b), Jet(c)
    lhs = ((A + B) * C).coeffs
    rhs = (A * C + B * C).coeffs
    scale = 1 + np.abs(lhs).max()
    assert np.abs(lhs - rhs).max() <= 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(cplx.filter(lambda z: 0.3 < abs(z) < 2), coeff_lists(order=5))
def test_log_exp_round_trip(c0, rest):
    j = Jet([c0] + rest[1:], 0.2)
    back = J.log(J.exp(j))
    # the constant term may land on another sheet
    k = round(((back.value - j.value) / (2j * math.pi)).real)
    assert abs(back.value - 2j * math.pi * k - j.value) < 1e-12
    assert np.allclose(back.coeffs[1:], j.coeffs[1:], atol=1e-10)


def majorant(outer, inner):
    """Coefficients of sum |outer_k| (|inner| - |inner_0|)^k, truncated.

    This bounds the size of the terms summed by compose, so rounding is
    judged against it rather than an absolute floor.
    """
    n = len(outer)
    tail = np.abs(np.asarray(inner, dtype=complex))
    tail[0] = 0
    out = np.zeros(n)
    power = np.zeros(n)
    power[0] = 1
    for c in np.abs(outer):
        out += c * power
        power = np.convolve(power, tail)[:n]
    return out


@settings(max_examples=100, deadline=None)
@given(cplx, cplx.filter(lambda z: abs(z) > 0.2), coeff_lists(order=8))
def test_revert_two_sided(base, slope, rest):
    coeffs = [rest[0], slope] + [0.3 * c for c in rest[2:]]
    a = Jet(coeffs, base)
    r = J.revert(a)
    for ident, outer, inner, x0 in ((J.compose(a, r), a, r, a.value), (J.compose(r, a), r, a, base)):
        err = np.abs(ident.coeffs - Jet.variable(x0, 8).coeffs)
        assert np.all(err <= 1e-12 * (1 + majorant(outer.coeffs, inner.coeffs)))


@settings(max_examples=60, deadline=None)
@given(coeff_lists(order=7), st.integers(1, 7))
def test_derivative_shift_consistent(c, k):
    a = Jet(c, 0.5)
    assert a.derivative().deriv(k - 1) == pytest.approx(a.deriv(k), rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(coeff_lists(order=6))
def test_compose_with_identity(c):
    a = Jet(c, 0.1)
    assert np.allclose(J.compose(a, Jet.variable(0.1, 6)).coeffs, a.coeffs)
