"""Gauss hypergeometric function 2F1(a, b; c; z) and its jets.

Two regimes only: the defining series for ``|z| <= 0.9`` and the Pfaff
transform ``z -> z/(z-1)`` where that lands inside the disc.  Terminating
series are summed exactly and are valid everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .jet import Jet

DIRECT_RADIUS = 0.9
MAX_TERMS = 10_000
_TAIL_RTOL = 1e-16


class HypergeometricError(ArithmeticError):
    pass


class NoConvergence(HypergeometricError):
    pass


class PolarParameter(HypergeometricError):
    pass


def _cx(v) -> complex:
    return complex(float(v)) if isinstance(v, Fraction) else complex(v)


@dataclass(frozen=True)
class HypParams:
    """Parameters (a, b, c); rationals are kept exact."""

    a: complex | Fraction
    b: complex | Fraction
    c: complex | Fraction

    def shifted(self, n: int) -> "HypParams":
        return HypParams(self.a + n, self.b + n, self.c + n)

    def second_solution(self) -> "HypParams":
        """Parameters of the companion solution s^(1-c) 2F1(a-c+1, b-c+1; 2-c; s)."""
        return HypParams(self.a - self.c + 1, self.b - self.c + 1, 2 - self.c)

    def as_tuple(self):
        return (self.a, self.b, self.c)


def _nonpos_int(v) -> int | None:
    """Return -n when ``v`` equals a non-positive integer -n, else None."""
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 and v <= 0 else None
    z = complex(v)
    if z.imag == 0 and z.real <= 0 and float(z.real).is_integer():
        return int(z.real)
    return None


def termination_degree(p: HypParams) -> int | None:
    """Degree of the polynomial when the series terminates, else None."""
    degs = [-n for n in (_nonpos_int(p.a), _nonpos_int(p.b)) if n is not None]
    return min(degs) if degs else None


def check_params(p: HypParams) -> None:
    nc = _nonpos_int(p.c)
    if nc is None:
        return
    deg = termination_degree(p)
    # (c)_m vanishes from m = -c + 1 on; the series must stop before that.
    if deg is None or deg > -nc:
        raise PolarParameter(f"c = {p.c} is a pole and the series does not terminate first")


def polynomial_coefficients(p: HypParams) -> list[complex]:
    """Coefficients of a terminating 2F1 in powers of z (exact when p is rational)."""
    deg = termination_degree(p)
    if deg is None:
        raise ValueError("series does not terminate")
    check_params(p)
    out = [Fraction(1) if all(isinstance(v, (int, Fraction)) for v in p.as_tuple()) else 1.0]
    t = out[0]
    for n in range(deg):
        t = t * (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1))
        out.append(t)
    return out


def _series(a: complex, b: complex, c: complex, z: complex) -> complex:
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    for n in range(MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) <= _TAIL_RTOL * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NoConvergence(f"2F1 series did not converge at z={z} within {MAX_TERMS} terms")


def hyp2f1(p: HypParams, z: complex) -> complex:
    """Value of 2F1(a, b; c; z)."""
    check_params(p)
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    deg = termination_degree(p)
    if deg is not None:
        coeffs = [_cx(v) for v in polynomial_coefficients(p)]
        return complex(np.polyval(coeffs[::-1], z))
    a, b, c = (_cx(v) for v in p.as_tuple())
    if abs(z) <= DIRECT_RADIUS:
        return _series(a, b, c, z)
    w = z / (z - 1.0)
    if abs(w) <= DIRECT_RADIUS:
        # Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        return (1.0 - z) ** (-a) * _series(a, c - b, c, w)
    raise NoConvergence(f"z={z} lies outside both the direct and Pfaff discs")


def _pochhammer(x, n: int):
    out = Fraction(1) if isinstance(x, (int, Fraction)) else 1.0
    for j in range(n):
        out = out * (x + j)
    return out


def hyp2f1_jet(p: HypParams, z0: complex, order: int) -> Jet:
    """Taylor jet of 2F1 at ``z0`` via d^n/dz^n F = (a)_n (b)_n / (c)_n F(a+n, b+n; c+n; z)."""
    check_params(p)
    deg = termination_degree(p)
    coeffs = []
    for n in range(order + 1):
        if deg is not None and n > deg:
            coeffs.append(0.0)
            continue
        num = _pochhammer(p.a, n) * _pochhammer(p.b, n)
        if num == 0:
            coeffs.append(0.0)
            continue
        den = _pochhammer(p.c, n)
        factor = num / den
        coeffs.append(_cx(factor) * hyp2f1(p.shifted(n), z0) / math.factorial(n))
    return Jet(coeffs, z0)


def hypergeom_residual(p: HypParams, z_jet: Jet) -> complex:
    """s(1-s) z'' + (c - (a+b+1) s) z' - a b z at the base point."""
    if z_jet.order < 2:
        raise ValueError("need a jet of order >= 2")
    a, b, c = (_cx(v) for v in p.as_tuple())
    s = z_jet.base
    z, dz, ddz = z_jet.deriv(0), z_jet.deriv(1), z_jet.deriv(2)
    return s * (1 - s) * ddz + (c - (a + b + 1) * s) * dz - a * b * z


def hypergeom_terms(p: HypParams, z_jet: Jet) -> list[complex]:
    """Signed monomials whose sum is :func:`hypergeom_residual`."""
    a, b, c = (_cx(v) for v in p.as_tuple())
    s = z_jet.base
    z, dz, ddz = z_jet.deriv(0), z_jet.deriv(1), z_jet.deriv(2)
    return [s * (1 - s) * ddz, c * dz, -(a + b + 1) * s * dz, -a * b * z]
