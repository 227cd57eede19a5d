"""Residual kernels, the SL2(C) action, Legendre duality and general solutions.

Each ``*_terms`` function returns the monomials of an equation evaluated at
the base point of a jet; the residual is their sum and the normalised residual
divides by the sum of their absolute values.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from . import jet as J
from .jet import Jet


class ODEError(ArithmeticError):
    pass


class PoleOfAction(ODEError):
    pass


class DegenerateDual(ODEError):
    pass


class CoincidentPoles(ODEError):
    pass


class ConstraintViolated(ODEError):
    pass


class MultipleRoots(ODEError):
    pass


def _frac(k) -> Fraction:
    return k if isinstance(k, Fraction) else Fraction(k)


def chazy_param(k) -> Fraction:
    """Validate the Chazy parameter (k**2 != 36)."""
    k = _frac(k)
    if k * k == 36:
        raise ValueError("the generalised Chazy equation needs k != +-6")
    return k


def normalised(terms) -> float:
    total = sum(terms)
    scale = sum(abs(t) for t in terms)
    if scale == 0:
        return 0.0
    return abs(total) / scale


# -- generalised Chazy equation ---------------------------------------------


def chazy_terms(k, y_jet: Jet) -> list[complex]:
    """Monomials of y''' - 2 y'' y + 3 y'^2 - m (6 y' - y^2)^2, m = 4/(36-k^2)."""
    if y_jet.order < 3:
        raise ValueError("need a jet of order >= 3")
    m = float(4 / (36 - chazy_param(k) ** 2))
    y, y1, y2, y3 = y_jet.derivs(3)
    return [
        y3,
        -2 * y2 * y,
        3 * y1**2,
        -36 * m * y1**2,
        12 * m * y1 * y**2,
        -m * y**4,
    ]


def chazy_residual(k, y_jet: Jet) -> complex:
    return sum(chazy_terms(k, y_jet))


def intc_terms(k, f_jet: Jet) -> list[complex]:
    """f f'''' - (k-2) f' f''' + 3k(k-2)/(2(k+6)) f''^2."""
    if f_jet.order < 4:
        raise ValueError("need a jet of order >= 4")
    k = chazy_param(k)
    f, f1, f2, f3, f4 = f_jet.derivs(4)
    kf = float(k)
    return [f * f4, -(kf - 2) * f1 * f3, float(3 * k * (k - 2) / (2 * (k + 6))) * f2**2]


def intc_residual(k, f_jet: Jet) -> complex:
    return sum(intc_terms(k, f_jet))


def ode6_terms(F_jet: Jet) -> list[complex]:
    """Monomials of the sixth-order equation for F(x) with flat (2,3,5) geometry."""
    if F_jet.order < 6:
        raise ValueError("need a jet of order >= 6")
    _, _, f2, f3, f4, f5, f6 = F_jet.derivs(6)
    return [
        10 * f6 * f2**3,
        -80 * f2**2 * f3 * f5,
        -51 * f2**2 * f4**2,
        336 * f2 * f3**2 * f4,
        -224 * f3**4,
    ]


def ode6_residual(F_jet: Jet) -> complex:
    return sum(ode6_terms(F_jet))


def noth_terms(h_jet: Jet, form: str = "H") -> list[complex]:
    """Monomials of the dual (Noth) equation.

    ``form='H'`` reads the jet as H(t) and uses H''..H^(6); ``form='y'`` reads
    it as y(t) and uses y'''..y^(7), one derivative higher.
    """
    if form == "H":
        off = 2
    elif form == "y":
        off = 3
    else:
        raise ValueError("form must be 'H' or 'y'")
    if h_jet.order < off + 4:
        raise ValueError(f"need a jet of order >= {off + 4}")
    d = h_jet.derivs(off + 4)
    a, b, c, e, g = d[off], d[off + 1], d[off + 2], d[off + 3], d[off + 4]
    return [
        10 * a**3 * g,
        -70 * a**2 * b * e,
        -49 * a**2 * c**2,
        280 * a * b**2 * c,
        -175 * b**4,
    ]


def noth_residual(h_jet: Jet, form: str = "H") -> complex:
    return sum(noth_terms(h_jet, form))


def integrate_twice_exp(y_jet: Jet, factor) -> Jet:
    """Jet of G with G'' = exp(factor * integral of y); all integration constants 0.

    Used for F'' = exp(int y / 2) on the k = 2/3 side and H'' = exp(2/3 int y)
    on the k = 3/2 side.  The residual kernels above are homogeneous and only
    see G'' and higher, so the constants are immaterial.
    """
    g2 = J.exp(float(factor) * y_jet.integral())
    return g2.integral().integral()


# -- SL2(C) action ------------------------------------------------------------


@dataclass(frozen=True)
class Mobius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = complex(self.a) * complex(self.d) - complex(self.b) * complex(self.c)
        if abs(det - 1) > 1e-9:
            raise ValueError(f"determinant {det} != 1")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 1.0) -> "Mobius":
        a, b, c = (complex(*rng.normal(scale=scale, size=2)) for _ in range(3))
        while abs(a) < 0.2:
            a = complex(*rng.normal(scale=scale, size=2))
        return cls(a, b, c, (1 + b * c) / a)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __call__(self, x):
        if isinstance(x, Jet):
            return (self.a * x + self.b) / self.denominator(x)
        den = complex(self.c) * x + complex(self.d)
        if den == 0:
            raise PoleOfAction("c x + d vanishes")
        return (complex(self.a) * x + complex(self.b)) / den

    def denominator(self, x):
        den = self.c * x + self.d
        v = den.value if isinstance(den, Jet) else den
        if abs(v) < 1e-300:
            raise PoleOfAction("c x + d vanishes")
        return den


JetFunction = Callable[[Jet], Jet]
YLike = Union[JetFunction, Jet]


def _evaluate(y: YLike, arg: Jet) -> Jet:
    """Apply a jet-valued function, or compose a point jet, at ``arg``."""
    if isinstance(y, Jet):
        return J.compose(y, arg)
    return y(arg)


def sl2_apply(g: Mobius, y: YLike, x: complex, order: int = J.DEFAULT_ORDER) -> Jet:
    """Jet at x of (cx+d)^-2 y(g.x) - 6c/(cx+d)."""
    X = Jet.variable(x, order)
    den = g.denominator(X)
    return _evaluate(y, g(X)) / den**2 - 6 * g.c / den


def weight_transform(g: Mobius, F: YLike, weight, x: complex, order: int = J.DEFAULT_ORDER,
                     branch: J.BranchSpec = J.PRINCIPAL) -> Jet:
    """Jet at x of (cx+d)^(-weight) F(g.x)."""
    X = Jet.variable(x, order)
    den = g.denominator(X)
    w = _frac(weight) if not isinstance(weight, complex) else weight
    if isinstance(w, Fraction) and w.denominator == 1:
        factor = den ** (-int(w))
    else:
        factor = J.power(den, -w, branch)
    return factor * _evaluate(F, g(X))


def pole_merger(c: complex, e: complex, f: complex) -> Mobius:
    """Sends -8/(3(x+e)) - 10/(3(x+f)) to -10/(3x) for k = 2/3 (needs e != f)."""
    if e == f:
        raise CoincidentPoles("e and f must differ")
    return Mobius(-e * c, f / (c * (e - f)), c, -(1 / (e * c)) * (1 + f / (e - f)))


def inversion(b: complex) -> Mobius:
    """[[0, b], [-1/b, 0]]: exchanges -10/(3x) and -8/(3x) for k = 2/3."""
    return Mobius(0, b, -1 / b, 0)


def quarter_turn() -> Mobius:
    """[[0, -1], [1, 0]]: sends y = 0 to y = -6/x."""
    return Mobius(0, -1, 1, 0)


# -- Legendre duality -----------------------------------------------------------


def legendre_dual(x_jet: Jet, F_jet: Jet) -> tuple[Jet, Jet]:
    """(x, F) -> (t, H) = (F', x F' - F) for a curve given parametrically.

    Both inputs are jets in a common parameter; the outputs are jets in the
    same parameter, one order lower.  Pass ``Jet.variable`` as ``x_jet`` for a
    graph F(x).
    """
    if x_jet.order != F_jet.order or abs(x_jet.base - F_jet.base) > 1e-12:
        raise J.BaseMismatch("x and F jets must share base and order")
    n = x_jet.order - 1
    dx = x_jet.derivative()
    if dx.value == 0:
        raise DegenerateDual("x is critical in the curve parameter")
    t = F_jet.derivative() / dx
    if t.order > 0 and t.derivative().value == 0:
        raise DegenerateDual("F'' vanishes: t is not a local coordinate")
    H = x_jet.truncate(n) * t - F_jet.truncate(n)
    return t, H


def as_graph(u_jet: Jet, v_jet: Jet) -> Jet:
    """Jet of v as a function of u for a parametrised curve (u(p), v(p))."""
    return J.compose(v_jet, J.revert(u_jet))


# -- general solutions ---------------------------------------------------------


def general_solution_k2(x1: complex, x2: complex, x3: complex | None = None) -> JetFunction:
    """y = -2 sum 1/(x - x_i); ``x3=None`` puts the third pole at infinity."""
    poles = [complex(p) for p in (x1, x2, x3) if p is not None]
    for i in range(len(poles)):
        for j in range(i):
            if abs(poles[i] - poles[j]) < 1e-12:
                raise CoincidentPoles(f"poles {poles[j]} and {poles[i]} coincide")

    def y(X: Jet) -> Jet:
        return sum((-2 / (X - p) for p in poles), Jet.constant(0, X.base, X.order))

    return y


@dataclass(frozen=True)
class QuarticCoeffs:
    """Coefficients of a t^4 + b t^3 + c t^2 + d t + e."""

    a: complex
    b: complex
    c: complex
    d: complex
    e: complex

    def constraint(self) -> complex:
        return 12 * self.a * self.e - 3 * self.b * self.d + self.c**2

    def constraint_scale(self) -> float:
        return abs(12 * self.a * self.e) + abs(3 * self.b * self.d) + abs(self.c) ** 2

    def as_list(self) -> list[complex]:
        return [complex(v) for v in (self.a, self.b, self.c, self.d, self.e)]

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "QuarticCoeffs":
        """Monic-times-``lead`` polynomial with the given finite roots (<= 4)."""
        p = np.array([complex(lead)])
        for r in roots:
            p = np.convolve(p, [1.0, -complex(r)])
        p = np.concatenate([np.zeros(5 - p.size, dtype=complex), p])
        return cls(*p)


def general_solution_k3(q: QuarticCoeffs, tol: float = 1e-12) -> JetFunction:
    """y = -(3/2) f'/f for the quartic f, which must satisfy 12ae - 3bd + c^2 = 0."""
    scale = q.constraint_scale()
    if abs(q.constraint()) > tol * max(scale, 1e-300):
        raise ConstraintViolated(f"12ae - 3bd + c^2 = {q.constraint()}")
    coeffs = np.trim_zeros(np.array(q.as_list()), "f")
    if coeffs.size < 2:
        raise ValueError("the quartic must have positive degree")
    roots = np.roots(coeffs)
    for i in range(roots.size):
        for j in range(i):
            if abs(roots[i] - roots[j]) < 1e-7 * max(1.0, abs(roots[i])):
                raise MultipleRoots(f"repeated root near {roots[i]}")
    return lambda X: -1.5 * _log_derivative(q.as_list(), X)


def unchecked_solution_k3(q: QuarticCoeffs) -> JetFunction:
    """Same formula without the constraint check (for negative controls)."""
    return lambda X: -1.5 * _log_derivative(q.as_list(), X)


def _log_derivative(coeffs, X: Jet) -> Jet:
    a, b, c, d, e = coeffs
    f = (((a * X + b) * X + c) * X + d) * X + e
    fp = ((4 * a * X + 3 * b) * X + 2 * c) * X + d
    return fp / f


def conic_point(rng: np.random.Generator, scale: float = 1.0) -> tuple[complex, complex, complex]:
    """Random (t1, t2, t3) with t1^2 + t2^2 + t3^2 - t1 t2 - t1 t3 - t2 t3 = 0.

    The form factors as (t1 + w t2 + w^2 t3)(t1 + w^2 t2 + w t3), w = e^(2 pi i/3).
    """
    w = cmath.exp(2j * cmath.pi / 3)
    t2, t3 = (complex(*rng.normal(scale=scale, size=2)) for _ in range(2))
    t1 = -(w * t2 + w * w * t3)
    return t1, t2, t3


def conic_form(t1, t2, t3) -> complex:
    return t1 * t1 + t2 * t2 + t3 * t3 - t1 * t2 - t1 * t3 - t2 * t3
