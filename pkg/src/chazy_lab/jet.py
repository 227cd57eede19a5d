"""Truncated complex Taylor series ("jets") and their algebra.

A :class:`Jet` carries the Taylor coefficients ``c_0 .. c_K`` of a single
analytic function around an expansion point ``base``.  Every derivative used
elsewhere in the package is read off a jet: the k-th derivative at ``base`` is
``k! * c_k``.

Arithmetic is closed at fixed order.  Elementary functions are propagated
with the usual first-order ODE recurrences, composition is Horner's scheme on
series, and reversion uses the Lagrange inversion formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational

import numpy as np

DEFAULT_ORDER = 8


class JetError(ArithmeticError):
    """Base class for jet algebra failures."""


class DivisionByZeroSeries(JetError):
    pass


class BranchPointError(JetError):
    pass


class BaseMismatch(JetError):
    pass


class NonInvertibleSeries(JetError):
    pass


@dataclass(frozen=True)
class BranchSpec:
    """Explicit sheet selection for multivalued elementary functions.

    ``log_index`` shifts ``log`` by ``2*pi*i*log_index``.  ``sheet`` does the
    same for the logarithm used inside fractional powers, so
    ``pow(a, r, BranchSpec(sheet=1))`` is ``exp(2*pi*i*r)`` times the
    principal value.
    """

    log_index: int = 0
    sheet: int = 0


PRINCIPAL = BranchSpec()


def _coerce_scalar(v) -> complex:
    if isinstance(v, Fraction):
        return complex(float(v))
    return complex(v)


class Jet:
    """Order-K truncated Taylor expansion of one function at one point."""

    __slots__ = ("base", "coeffs")

    def __init__(self, coeffs, base=0.0):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "base", _coerce_scalar(base))

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def variable(cls, base, order: int = DEFAULT_ORDER) -> "Jet":
        """Jet of the identity map ``u -> u`` expanded at ``base``."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = _coerce_scalar(base)
        if order >= 1:
            c[1] = 1.0
        return cls(c, base)

    @classmethod
    def constant(cls, value, base=0.0, order: int = DEFAULT_ORDER) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = _coerce_scalar(value)
        return cls(c, base)

    @classmethod
    def from_derivatives(cls, derivs, base=0.0) -> "Jet":
        return cls([d / math.factorial(k) for k, d in enumerate(derivs)], base)

    # -- basic accessors --------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def deriv(self, k: int) -> complex:
        """k-th derivative at the base point."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return complex(self.coeffs[k]) * math.factorial(k)

    def derivs(self, upto: int | None = None) -> list[complex]:
        n = self.order if upto is None else upto
        return [self.deriv(k) for k in range(n + 1)]

    def __len__(self) -> int:
        return self.coeffs.size

    def __repr__(self) -> str:
        body = ", ".join(f"{z:.6g}" for z in self.coeffs)
        return f"Jet(base={self.base:.6g}, [{body}])"

    def __call__(self, u) -> complex:
        """Evaluate the truncated polynomial at ``base + u``."""
        return complex(np.polyval(self.coeffs[::-1], u))

    # -- calculus ---------------------------------------------------------

    def derivative(self) -> "Jet":
        """Jet of f' (loses one order)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1)
        return Jet(self.coeffs[1:] * k, self.base)

    def integral(self, constant=0.0) -> "Jet":
        """Jet of the antiderivative taking value ``constant`` at base (gains one order)."""
        c = np.empty(self.order + 2, dtype=complex)
        c[0] = _coerce_scalar(constant)
        c[1:] = self.coeffs / np.arange(1, self.order + 2)
        return Jet(c, self.base)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise the order of a jet by truncation")
        return Jet(self.coeffs[: order + 1], self.base)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Jet") -> None:
        if other.order != self.order:
            raise BaseMismatch(f"order mismatch: {self.order} vs {other.order}")
        if abs(other.base - self.base) > 1e-12 * max(1.0, abs(self.base)):
            raise BaseMismatch(f"base mismatch: {self.base} vs {other.base}")

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            self._check(other)
            return other
        if isinstance(other, (Number, np.number)):
            return Jet.constant(other, self.base, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Jet(self.coeffs + o.coeffs, self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.base)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Jet(self.coeffs - o.coeffs, self.base)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Jet(o.coeffs - self.coeffs, self.base)

    def __mul__(self, other):
        if isinstance(other, (Number, np.number)) and not isinstance(other, Jet):
            return Jet(self.coeffs * _coerce_scalar(other), self.base)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = self.order + 1
        return Jet(np.convolve(self.coeffs, o.coeffs)[:n], self.base)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.coeffs
        if a[0] == 0:
            raise DivisionByZeroSeries("reciprocal of a jet with zero constant term")
        n = a.size
        b = np.zeros(n, dtype=complex)
        b[0] = 1.0 / a[0]
        for k in range(1, n):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) / a[0]
        return Jet(b, self.base)

    def __truediv__(self, other):
        if isinstance(other, (Number, np.number)) and not isinstance(other, Jet):
            o = _coerce_scalar(other)
            if o == 0:
                raise DivisionByZeroSeries("division by a zero scalar")
            return Jet(self.coeffs / o, self.base)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __pow__(self, r):
        if isinstance(r, int) and not isinstance(r, bool):
            if r >= 0:
                out = Jet.constant(1.0, self.base, self.order)
                sq, e = self, r
                while e:
                    if e & 1:
                        out = out * sq
                    sq = sq * sq
                    e >>= 1
                return out
            return (self ** (-r)).reciprocal()
        return power(self, r)

    def close_to(self, other: "Jet", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        self._check(other)
        scale = np.maximum(np.abs(self.coeffs), np.abs(other.coeffs))
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol + rtol * scale))


# -- elementary functions -------------------------------------------------


def exp(a: Jet) -> Jet:
    f = a.coeffs
    n = f.size
    g = np.zeros(n, dtype=complex)
    g[0] = cmath.exp(f[0])
    k = np.arange(n)
    for m in range(1, n):
        g[m] = np.dot(k[1 : m + 1] * f[1 : m + 1], g[m - 1 :: -1][:m]) / m
    return Jet(g, a.base)


def log(a: Jet, branch: BranchSpec = PRINCIPAL) -> Jet:
    f = a.coeffs
    if f[0] == 0:
        raise BranchPointError("log of a jet vanishing at its base point")
    n = f.size
    g = np.zeros(n, dtype=complex)
    g[0] = cmath.log(f[0]) + 2j * math.pi * branch.log_index
    k = np.arange(n)
    for m in range(1, n):
        acc = np.dot(k[1:m] * g[1:m], f[m - 1 : 0 : -1]) if m > 1 else 0.0
        g[m] = (f[m] - acc / m) / f[0]
    return Jet(g, a.base)


def power(a: Jet, r, branch: BranchSpec = PRINCIPAL) -> Jet:
    """``a**r`` for real or complex ``r``; the branch of ``c_0**r`` is explicit."""
    f = a.coeffs
    if f[0] == 0:
        raise BranchPointError("fractional power of a jet vanishing at its base point")
    rr = _coerce_scalar(r)
    n = f.size
    g = np.zeros(n, dtype=complex)
    g[0] = cmath.exp(rr * (cmath.log(f[0]) + 2j * math.pi * branch.sheet))
    k = np.arange(n)
    for m in range(1, n):
        w = (rr + 1.0) * k[1 : m + 1] - m
        g[m] = np.dot(w * f[1 : m + 1], g[m - 1 :: -1][:m]) / (m * f[0])
    return Jet(g, a.base)


def sqrt(a: Jet, branch: BranchSpec = PRINCIPAL) -> Jet:
    return power(a, Fraction(1, 2), branch)


def _sincos(a: Jet) -> tuple[Jet, Jet]:
    f = a.coeffs
    n = f.size
    s = np.zeros(n, dtype=complex)
    c = np.zeros(n, dtype=complex)
    s[0], c[0] = cmath.sin(f[0]), cmath.cos(f[0])
    k = np.arange(n)
    for m in range(1, n):
        kf = k[1 : m + 1] * f[1 : m + 1]
        s[m] = np.dot(kf, c[m - 1 :: -1][:m]) / m
        c[m] = -np.dot(kf, s[m - 1 :: -1][:m]) / m
    return Jet(s, a.base), Jet(c, a.base)


def sin(a: Jet) -> Jet:
    return _sincos(a)[0]


def cos(a: Jet) -> Jet:
    return _sincos(a)[1]


def tan(a: Jet) -> Jet:
    s, c = _sincos(a)
    return s / c


ELEMENTARY = {
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
    "tan": tan,
}


def apply_elementary(fn: str, a: Jet, branch: BranchSpec = PRINCIPAL, r=None) -> Jet:
    """Dispatch by name; ``fn='pow'`` requires the exponent ``r``."""
    if fn == "pow":
        if r is None:
            raise ValueError("pow requires an exponent")
        return power(a, r, branch)
    if fn in ("log", "sqrt"):
        return ELEMENTARY[fn](a, branch)
    try:
        return ELEMENTARY[fn](a)
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None


# -- composition and reversion ---------------------------------------------


def compose(outer: Jet, inner: Jet, tol: float = 1e-9) -> Jet:
    """Jet of ``outer(inner(x))`` at ``inner.base``.

    ``inner.value`` must coincide with ``outer.base``.
    """
    if outer.order != inner.order:
        raise BaseMismatch(f"order mismatch: {outer.order} vs {inner.order}")
    if abs(inner.value - outer.base) > tol * max(1.0, abs(outer.base)):
        raise BaseMismatch(
            f"inner value {inner.value} does not match outer base {outer.base}"
        )
    n = outer.order + 1
    d = np.array(inner.coeffs)
    d[0] = 0.0
    out = np.zeros(n, dtype=complex)
    for ck in outer.coeffs[::-1]:
        out = np.convolve(out, d)[:n]
        out[0] += ck
    return Jet(out, inner.base)


def revert(a: Jet, tol: float = 1e-300) -> Jet:
    """Compositional inverse: ``compose(a, revert(a))`` is the identity jet.

    The result is expanded at ``a.value`` and takes the value ``a.base``.
    """
    c = a.coeffs
    if a.order == 0:
        return Jet([a.base], a.value)
    if abs(c[1]) <= tol:
        raise NonInvertibleSeries("derivative vanishes at the base point")
    n = a.order + 1
    # phi(u) = u / (a(u) - a0), a unit series; b_m = [u^(m-1)] phi^m / m
    shifted = Jet(np.concatenate([c[1:], [0.0]]), 0.0)
    phi = shifted.reciprocal()
    b = np.zeros(n, dtype=complex)
    b[0] = a.base
    pw = Jet.constant(1.0, 0.0, a.order)
    for m in range(1, n):
        pw = pw * phi
        b[m] = pw.coeffs[m - 1] / m
    return Jet(b, a.value)


def reparametrise(f_of_p: Jet, x_of_p: Jet) -> Jet:
    """Re-express a jet in parameter p as a jet in x, given x(p) at the same base."""
    return compose(f_of_p, revert(x_of_p))


def identity_like(a: Jet) -> Jet:
    return Jet.variable(a.base, a.order)


def is_rational(r) -> bool:
    return isinstance(r, Rational)
