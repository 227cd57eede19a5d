"""Schwarz triangle functions.

A Schwarz function s(alpha, beta, gamma; x) solves

    {s, x} + (s')**2 V(s) / 2 = 0

and its inverse is a quotient of two solutions of the hypergeometric equation.
This module converts angles to hypergeometric parameters, evaluates the
triangle map x(s) and its inverse, and builds Chazy solutions from a
Schwarz-function jet through the three logarithmic derivatives Omega_1..3.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import jet as J
from .hyp2f1 import HypParams, NoConvergence, PolarParameter, hyp2f1_jet
from .jet import Jet


class SchwarzError(ArithmeticError):
    pass


class SingularPoint(SchwarzError):
    pass


class CriticalPoint(SchwarzError):
    pass


class DegenerateC(SchwarzError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class TriangleAngles:
    """Triangle angles in units of pi, stored exactly."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = _frac(getattr(self, name))
            if v <= 0:
                raise ValueError(f"angle {name}={v} must be positive")
            object.__setattr__(self, name, v)

    @classmethod
    def parse(cls, text: str) -> "TriangleAngles":
        parts = [p.strip() for p in text.strip("() ").split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three angles, got {text!r}")
        return cls(*(Fraction(p) for p in parts))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.alpha, self.beta, self.gamma)

    def permuted(self, perm: tuple[int, int, int]) -> "TriangleAngles":
        t = self.as_tuple()
        return TriangleAngles(*(t[i] for i in perm))

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.as_tuple()) + ")"


def angles_to_abc(t: TriangleAngles) -> HypParams:
    a = (1 - t.alpha - t.beta - t.gamma) / 2
    b = (1 + t.alpha - t.beta - t.gamma) / 2
    c = 1 - t.beta
    return HypParams(a, b, c)


def _check_s(s: complex) -> None:
    if abs(s) < 1e-14 or abs(s - 1) < 1e-14:
        raise SingularPoint(f"s={s} is a vertex of the triangle map")


def potential(t: TriangleAngles, s):
    """V(s); accepts a complex number or a jet."""
    if not isinstance(s, Jet):
        s = complex(s)
        _check_s(s)
    al, be, ga = (float(v) for v in t.as_tuple())
    return ((1 - be**2) / s**2 + (1 - ga**2) / (s - 1) ** 2
            + (be**2 + ga**2 - al**2 - 1) / (s * (s - 1)))


def schwarzian(s_jet: Jet) -> complex:
    """{s, x} = (s''/s')' - (s''/s')**2 / 2 at the base point."""
    if s_jet.order < 3:
        raise ValueError("schwarzian needs a jet of order >= 3")
    d1, d2, d3 = s_jet.deriv(1), s_jet.deriv(2), s_jet.deriv(3)
    if d1 == 0:
        raise CriticalPoint("s' vanishes at the base point")
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarz_terms(t: TriangleAngles, s_jet: Jet) -> list[complex]:
    """Monomials of {s,x} + (s')^2 V(s)/2 whose sum is the Schwarz-ODE residual."""
    if s_jet.order < 3:
        raise ValueError("need a jet of order >= 3")
    s = s_jet.value
    _check_s(s)
    d1, d2, d3 = s_jet.deriv(1), s_jet.deriv(2), s_jet.deriv(3)
    if d1 == 0:
        raise CriticalPoint("s' vanishes at the base point")
    al, be, ga = (float(v) for v in t.as_tuple())
    half = 0.5 * d1**2
    return [
        d3 / d1,
        -1.5 * (d2 / d1) ** 2,
        half * (1 - be**2) / s**2,
        half * (1 - ga**2) / (s - 1) ** 2,
        half * (be**2 + ga**2 - al**2 - 1) / (s * (s - 1)),
    ]


def schwarz_residual(t: TriangleAngles, s_jet: Jet) -> complex:
    return sum(schwarz_terms(t, s_jet))


# -- forward map and inversion ---------------------------------------------


def triangle_map_jet(t: TriangleAngles, s0: complex, order: int = J.DEFAULT_ORDER) -> Jet:
    """Jet in s of x(s) = s^(1-c) 2F1(a-c+1, b-c+1; 2-c; s) / 2F1(a, b; c; s)."""
    s0 = complex(s0)
    _check_s(s0)
    p = angles_to_abc(t)
    try:
        f1 = hyp2f1_jet(p, s0, order)
        f2 = hyp2f1_jet(p.second_solution(), s0, order)
    except PolarParameter as exc:
        raise DegenerateC(f"hypergeometric quotient degenerates for {t}: {exc}") from exc
    sv = Jet.variable(s0, order)
    return J.power(sv, 1 - p.c) * f2 / f1


def triangle_map(t: TriangleAngles, s: complex) -> complex:
    return triangle_map_jet(t, s, order=0).value


def invert_triangle_map(
    t: TriangleAngles,
    x: complex,
    seed: complex,
    *,
    tol: float = 1e-12,
    max_iter: int = 50,
    forward=None,
) -> complex:
    """Solve x(s) = x by Newton iteration starting from ``seed``.

    When Newton from the seed fails, the target is approached along the
    straight line from x(seed) to x, halving the step until each leg
    converges.  ``forward`` may replace the hypergeometric map by a jet-valued
    closed form ``s0 -> jet of x in s``.
    """
    fwd = forward or (lambda s0: triangle_map_jet(t, s0, order=1))
    x = complex(x)

    def newton(target: complex, s: complex) -> complex:
        for _ in range(max_iter):
            with np.errstate(all="ignore"):
                jx = fwd(s)
            err = jx.value - target
            if not (cmath.isfinite(err) and cmath.isfinite(jx.deriv(1))):
                raise NoConvergence(f"Newton step left the domain at s={s}")
            if abs(err) <= tol * max(1.0, abs(target)):
                return s
            d = jx.deriv(1)
            if d == 0:
                raise CriticalPoint(f"x'(s) vanishes at s={s}")
            s = s - err / d
        raise NoConvergence(f"Newton inversion did not converge towards x={target}")

    s = complex(seed)
    start = fwd(s).value
    try:
        return newton(x, s)
    except (NoConvergence, CriticalPoint, SchwarzError, ZeroDivisionError):
        pass
    lam, step = 0.0, 0.25
    while lam < 1.0:
        nxt = min(1.0, lam + step)
        try:
            s = newton(start + nxt * (x - start), s)
            lam = nxt
            step = min(step * 2, 0.5)
        except (NoConvergence, CriticalPoint, SchwarzError, ZeroDivisionError):
            step /= 2
            if step < 1e-6:
                raise NoConvergence(f"homotopy towards x={x} stalled at fraction {lam}")
    return s


# -- Omegas and recipes -------------------------------------------------------


def omega_jets(s_jet: Jet) -> tuple[Jet, Jet, Jet]:
    """Jets (order K-2) of Omega_1, Omega_2, Omega_3 for s(x) given to order K."""
    if s_jet.order < 2:
        raise ValueError("need a jet of order >= 2")
    s = s_jet.value
    _check_s(s)
    n = s_jet.order - 2
    sp = s_jet.derivative()
    if sp.value == 0:
        raise CriticalPoint("s' vanishes at the base point")
    lsp = (sp.derivative() / sp.truncate(n))
    by_s = (sp / s_jet.truncate(n + 1)).truncate(n)
    by_s1 = (sp / (s_jet.truncate(n + 1) - 1)).truncate(n)
    o1 = -0.5 * (lsp - by_s - by_s1)
    o2 = -0.5 * (lsp - by_s1)
    o3 = -0.5 * (lsp - by_s)
    return o1, o2, o3


def omegas(s_jet: Jet) -> tuple[complex, complex, complex]:
    return tuple(o.value for o in omega_jets(s_jet))


BASE_RECIPES = ((-2, -2, -2), (-1, -2, -3), (-4, -1, -1), (-1, -4, -1), (-1, -1, -4))


@dataclass(frozen=True)
class Recipe:
    """Coefficients (c1, c2, c3) of y = c1*Omega_1 + c2*Omega_2 + c3*Omega_3.

    Coefficient i belongs to the vertex carrying angle i, so a recipe may be
    any rearrangement of one of :data:`BASE_RECIPES` provided the angles are
    rearranged the same way.
    """

    c1: int
    c2: int
    c3: int

    def __post_init__(self):
        if sorted(self.coefficients) not in [sorted(r) for r in BASE_RECIPES]:
            raise ValueError(f"{self.coefficients} is not a rearranged base recipe")

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.c1, self.c2, self.c3)

    def permuted(self, perm) -> "Recipe":
        c = self.coefficients
        return Recipe(*(c[i] for i in perm))

    def log_form(self) -> tuple[Fraction, Fraction]:
        """Exponents (p, q) with y = d/dx log( (s')^3 / (s^p (s-1)^q) )."""
        c1, c2, c3 = self.coefficients
        return Fraction(-(c1 + c3), 2), Fraction(-(c1 + c2), 2)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coefficients) + ")"


def chazy_from_schwarz(recipe: Recipe, s_jet: Jet) -> Jet:
    """Jet of y = sum c_i Omega_i, of order ``s_jet.order - 2``."""
    if s_jet.order < 4:
        raise ValueError("need a jet of order >= 4 so that y carries three derivatives")
    o = omega_jets(s_jet)
    c = recipe.coefficients
    return c[0] * o[0] + c[1] * o[1] + c[2] * o[2]


# Angle patterns as functions of k, paired with the recipe that solves the
# generalised Chazy equation for them.
def _patterns(k: Fraction):
    third, half = Fraction(1, 3), Fraction(1, 2)
    return [
        ((2 / k, 2 / k, 2 / k), (-2, -2, -2)),
        ((2 / k, third, third), (-2, -2, -2)),
        ((1 / k, third, half), (-1, -2, -3)),
        ((1 / k, 2 / k, half), (-1, -2, -3)),
        ((1 / k, third, 3 / k), (-1, -2, -3)),
        ((4 / k, 1 / k, 1 / k), (-4, -1, -1)),
        ((Fraction(2, 3), 1 / k, 1 / k), (-4, -1, -1)),
    ]


CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class CompatEntry:
    k: Fraction
    angles: TriangleAngles
    recipe: Recipe
    pattern: int
    rotation: int


def compatibility_table(k) -> list[CompatEntry]:
    """Every (angles, recipe) pairing that solves the equation for parameter k.

    Cyclic rotations rotate angles and coefficients together.  Duplicate
    pairings are dropped.
    """
    k = _frac(k)
    out, seen = [], set()
    for idx, (angles, coeffs) in enumerate(_patterns(k)):
        for rot, perm in enumerate(CYCLIC):
            ang = TriangleAngles(*(angles[i] for i in perm))
            rec = Recipe(*(coeffs[i] for i in perm))
            key = (ang.as_tuple(), rec.coefficients)
            if key in seen:
                continue
            seen.add(key)
            out.append(CompatEntry(k, ang, rec, idx, rot))
    return out


def schwarz_jet_from_map(t: TriangleAngles, s0: complex, order: int = J.DEFAULT_ORDER) -> Jet:
    """Jet of s(x) at x = x(s0), by reverting the hypergeometric triangle map."""
    return J.revert(triangle_map_jet(t, s0, order))


def all_permutations(t: TriangleAngles):
    return [t.permuted(p) for p in itertools.permutations(range(3))]
