"""Exact polynomial algebra over the rationals.

Coefficients are :class:`fractions.Fraction`.  :class:`Poly` is a sparse
multivariate polynomial over named variables; :class:`PolyQ` is a dense
univariate polynomial used for root finding.  Resultants are Sylvester
determinants computed by fraction-free (Bareiss) elimination.

Also here: the quartic s^4 - 2s^3 - 4xs + 2x solved by radicals through its
resolvent cubic, and the parameter scan for Legendre-dual pairs of
generalised Chazy equations.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

Rat = Fraction


class ZeroPolynomial(ArithmeticError):
    pass


class InexactDivision(ArithmeticError):
    pass


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"exact coefficient expected, got {type(v).__name__}")


class Poly:
    """Sparse polynomial in named variables with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        clean = {}
        for mono, c in (terms or {}).items():
            c = _rat(c)
            if c:
                if len(mono) != len(self.vars):
                    raise ValueError("monomial arity does not match the variables")
                clean[tuple(mono)] = clean.get(tuple(mono), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    # -- construction ------------------------------------------------------

    @classmethod
    def const(cls, variables, c) -> "Poly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables=None) -> "Poly":
        variables = tuple(variables or (name,))
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {mono: 1})

    @classmethod
    def gens(cls, *names: str) -> tuple["Poly", ...]:
        return tuple(cls.var(n, names) for n in names)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return Poly.const(self.vars, other)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out, base = Poly.const(self.vars, 1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.exact_div(other)
        c = _rat(other)
        return Poly(self.vars, {m: v / c for m, v in self.terms.items()})

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def index(self, name: str) -> int:
        return self.vars.index(name)

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        i = self.index(name)
        return max(m[i] for m in self.terms)

    def coeff_in(self, name: str, k: int) -> "Poly":
        """Coefficient of name**k, still written over all variables."""
        i = self.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return Poly(self.vars, out)

    def coeffs_in(self, name: str) -> list["Poly"]:
        return [self.coeff_in(name, k) for k in range(self.degree(name) + 1)]

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute rationals (or Polys over the same variables) for variables."""
        out = Poly(self.vars)
        for m, c in self.terms.items():
            term = Poly.const(self.vars, c)
            mono = list(m)
            for name, v in values.items():
                i = self.index(name)
                e, mono[i] = mono[i], 0
                if e:
                    term = term * (self._lift(v) ** e)
            out = out + term * Poly(self.vars, {tuple(mono): 1})
        return out

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        """Numerical value; every variable must be given."""
        idx = [values[v] for v in self.vars]
        total = 0j
        for m, c in self.terms.items():
            t = complex(c.numerator) / c.denominator
            for x, e in zip(idx, m):
                if e:
                    t *= x**e
            total += t
        return total

    def evaluate_terms(self, values: Mapping[str, complex]) -> list[complex]:
        idx = [values[v] for v in self.vars]
        out = []
        for m, c in self.terms.items():
            t = complex(c.numerator) / c.denominator
            for x, e in zip(idx, m):
                if e:
                    t *= x**e
            out.append(t)
        return out

    def normalised_value(self, values: Mapping[str, complex]) -> float:
        terms = self.evaluate_terms(values)
        scale = sum(abs(t) for t in terms)
        return abs(sum(terms)) / scale if scale else 0.0

    def leading(self) -> tuple[tuple, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises InexactDivision otherwise."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (dm, dc), = other.terms.items()
            out = {}
            for m, c in self.terms.items():
                q = tuple(a - b for a, b in zip(m, dm))
                if min(q, default=0) < 0:
                    raise InexactDivision("monomial does not divide")
                out[q] = c / dc
            return Poly(self.vars, out)
        rem, quo = self, Poly(self.vars)
        dm, dc = other.leading()
        while rem:
            m, c = rem.leading()
            q = tuple(a - b for a, b in zip(m, dm))
            if min(q) < 0:
                raise InexactDivision("polynomial division leaves a remainder")
            t = Poly(self.vars, {q: c / dc})
            quo = quo + t
            rem = rem - t * other
        return quo

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive with integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = reduce(math.gcd, (c.numerator for c in self.terms.values()))
        dens = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in self.terms.values()))
        return Fraction(abs(nums), dens)

    def monomial_content(self) -> tuple:
        """Largest monomial dividing every term."""
        return tuple(min(m[i] for m in self.terms) for i in range(len(self.vars)))

    def canonical(self, strip_monomial: bool = False) -> "Poly":
        """Primitive integer form with a positive leading coefficient.

        Two polynomials agree up to a nonzero rational scalar exactly when
        their canonical forms are equal.  With ``strip_monomial`` a common
        monomial factor is also removed.
        """
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no canonical form")
        p = self
        if strip_monomial:
            mc = p.monomial_content()
            p = Poly(p.vars, {tuple(a - b for a, b in zip(m, mc)): c for m, c in p.terms.items()})
        p = p / p.content()
        if p.leading()[1] < 0:
            p = -p
        return p

    def rename(self, variables: Iterable[str]) -> "Poly":
        return Poly(tuple(variables), self.terms)

    def reorder(self, variables: Iterable[str]) -> "Poly":
        """Same polynomial over a (super)set of variables in a new order."""
        variables = tuple(variables)
        missing = [v for v, i in zip(self.vars, range(len(self.vars)))
                   if v not in variables and any(m[i] for m in self.terms)]
        if missing:
            raise ValueError(f"variables {missing} would be dropped")
        pos = [self.vars.index(v) if v in self.vars else None for v in variables]
        out = {tuple(m[p] if p is not None else 0 for p in pos): c for m, c in self.terms.items()}
        return Poly(variables, out)

    def free_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(m[i] for m in self.terms))

    def to_text(self) -> str:
        """Canonical sparse text form: monomials in descending lex order."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, m) if e)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_text

    def __repr__(self):
        return f"Poly({self.vars}, {self.to_text()!r})"


PolyQ2 = Poly


def poly2(text_vars: tuple[str, str], terms: Mapping[tuple, object]) -> Poly:
    """A bivariate :class:`Poly`; kept for readability at call sites."""
    if len(text_vars) != 2:
        raise ValueError("PolyQ2 needs exactly two variables")
    return Poly(text_vars, terms)


# -- resultants ---------------------------------------------------------------


def bareiss_det(matrix: list[list[Poly]], trace: list | None = None) -> Poly:
    """Determinant by fraction-free elimination.

    Every division is exact.  When ``trace`` is a list, the intermediate
    pivots are appended to it.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    a = [row[:] for row in matrix]
    vars_ = a[0][0].vars
    sign = 1
    prev = Poly.const(vars_, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Poly(vars_)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = Poly(vars_)
        prev = piv
        if trace is not None:
            trace.append(piv)
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(p: Poly, q: Poly, name: str) -> list[list[Poly]]:
    m, n = p.degree(name), q.degree(name)
    pc, qc = p.coeffs_in(name)[::-1], q.coeffs_in(name)[::-1]
    zero = Poly(p.vars)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: Poly, q: Poly, name: str, trace: list | None = None) -> Poly:
    """Res_name(p, q), written over the remaining variables."""
    if p.vars != q.vars:
        q = q.reorder(p.vars)
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    if p.degree(name) < 1 or q.degree(name) < 1:
        raise ZeroPolynomial(f"both polynomials must involve {name}")
    res = bareiss_det(sylvester_matrix(p, q, name), trace)
    rest = tuple(v for v in p.vars if v != name)
    return res.reorder(rest)


# -- univariate ---------------------------------------------------------------


class PolyQ:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = [_rat(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_poly(cls, p: Poly) -> "PolyQ":
        free = p.free_vars()
        if len(free) > 1:
            raise ValueError(f"not univariate: {free}")
        if not free:
            return cls([p.terms.get((0,) * len(p.vars), 0)])
        i = p.index(free[0])
        out = [Fraction(0)] * (p.degree(free[0]) + 1)
        for m, c in p.terms.items():
            out[m[i]] += c
        return cls(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else complex(c))
        return acc

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        quo = [Fraction(0)] * max(len(rem) - d, 1)
        lead = other.coeffs[-1]
        for i in range(len(rem) - d - 1, -1, -1):
            q = rem[i + d] / lead
            quo[i] = q
            for j, c in enumerate(other.coeffs):
                rem[i + j] -= q * c
        return PolyQ(quo), PolyQ(rem[:d] if d else [])

    def monic(self) -> "PolyQ":
        return PolyQ([c / self.coeffs[-1] for c in self.coeffs])

    def gcd(self, other: "PolyQ") -> "PolyQ":
        a, b = self, other
        while b.coeffs:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a.coeffs else a

    def derivative(self) -> "PolyQ":
        return PolyQ([i * c for i, c in enumerate(self.coeffs)][1:])

    def numeric_roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.array([], dtype=complex)
        return np.roots([complex(c) for c in reversed(self.coeffs)])

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, each once, in increasing order.

        Candidates p/q come from the rational root theorem on the primitive
        integer form; each candidate is checked exactly.
        """
        if not self.coeffs:
            raise ZeroPolynomial("every rational is a root of the zero polynomial")
        c = list(self.coeffs)
        roots = set()
        while c and c[0] == 0:
            roots.add(Fraction(0))
            c.pop(0)
        if len(c) <= 1:
            return sorted(roots)
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in c))
        ints = [int(v * lcm) for v in c]
        for p in _divisors(abs(ints[0])):
            for q in _divisors(abs(ints[-1])):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if cand not in roots and self(cand) == 0:
                        roots.add(cand)
        return sorted(roots)

    def __repr__(self):
        return f"PolyQ({[str(c) for c in self.coeffs]})"


def _divisors(n: int) -> list[int]:
    if n == 0:
        raise ValueError("no divisors of zero")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- solving polynomial systems -------------------------------------------------


def _eliminate(polys: list[Poly], keep: str) -> list[Poly]:
    """Eliminate every variable except ``keep`` by successive resultants."""
    current = [p for p in polys if p]
    for name in [v for v in current[0].vars if v != keep]:
        involved = [p for p in current if p.degree(name) > 0]
        rest = [p for p in current if p.degree(name) <= 0]
        if not involved:
            continue
        involved.sort(key=lambda p: (p.degree(name), len(p.terms)))
        pivot = involved[0]
        for other in involved[1:]:
            r = resultant(pivot, other, name).reorder(pivot.vars)
            if r:
                rest.append(r.canonical())
        current = rest
        if not current:
            break
    return current


def solve_rational(polys: list[Poly], order: Iterable[str] | None = None) -> list[dict[str, Fraction]]:
    """All rational solutions of a zero-dimensional system, by elimination.

    The last variable of ``order`` is solved first; its rational roots are
    substituted into the original system and the rest is solved recursively.
    Raises ValueError when the elimination leaves no univariate polynomial
    (positive-dimensional solution set).
    """
    polys = [p for p in polys if p]
    if not polys:
        raise ValueError("empty system")
    order = list(order or polys[0].vars)
    if not order:
        return [{}] if all(p.is_zero() for p in polys) else []
    target = order[-1]
    live = [p for p in polys if p.free_vars()]
    if len(live) != len(polys):
        return []
    uni = [p for p in _eliminate(polys, target) if p.free_vars() == (target,)]
    consts = [p for p in _eliminate(polys, target) if not p.free_vars()]
    if consts:
        return []
    if not uni:
        raise ValueError(f"could not isolate {target}; the system may be positive-dimensional")
    g = reduce(lambda a, b: a.gcd(b), (PolyQ.from_poly(p) for p in uni))
    out = []
    for root in g.rational_roots():
        sub = [p.subs({target: root}) for p in polys]
        if any(not q.free_vars() and q for q in sub):
            continue
        sub = [q for q in sub if q]
        if not sub:
            rest = [{}] if len(order) == 1 else None
            if rest is None:
                raise ValueError("solution set is positive-dimensional after substitution")
        else:
            rest = solve_rational(sub, order[:-1])
        for sol in rest:
            out.append({**sol, target: root})
    return out


# -- quartic by radicals -----------------------------------------------------------

_OMEGA = complex(-0.5, math.sqrt(3) / 2)


def _cbrt(z: complex) -> complex:
    """Principal cube root."""
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3)


def quartic_poly(x) -> PolyQ | list[complex]:
    """Coefficients (ascending) of s^4 - 2s^3 - 4xs + 2x."""
    return [2 * x, -4 * x, 0, -2, 1]


def quartic_residual(s: complex, x: complex) -> float:
    terms = [s**4, -2 * s**3, -4 * x * s, 2 * x]
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0


def resolvent_cubic(u: complex, x: complex) -> complex:
    """(u + 3/2)(u^2 + 3/4) - (4x + 1)^2."""
    return (u + 1.5) * (u * u + 0.75) - (4 * x + 1) ** 2


def resolvent_cubic_roots(x: complex) -> tuple[complex, complex, complex]:
    """u_j = 2 w^j (x(2x+1))^(1/3) - 1/2 for j = 0, 1, 2."""
    x = complex(x)
    c = 2 * _cbrt(x * (2 * x + 1))
    return tuple(_OMEGA**j * c - 0.5 for j in range(3))


def quartic_by_radicals(x: complex) -> tuple[complex, complex, complex, complex]:
    """Roots of s^4 - 2s^3 - 4xs + 2x.

    With s = xi + 1/2 the quartic becomes xi^4 - 3/2 xi^2 - (4x+1) xi - 3/16.
    For a resolvent root u and A = sqrt(u + 3/2), P = xi^2 + u/2 and
    Q = A xi + (4x+1)/(2A) satisfy P^2 - Q^2 = quartic, so the roots come from
    the two quadratics P = Q and P = -Q.  The root u with the largest
    |u + 3/2| is used so that A stays away from zero.
    """
    x = complex(x)
    b = 4 * x + 1
    us = resolvent_cubic_roots(x)
    u = max(us, key=lambda v: abs(v + 1.5))
    A = cmath.sqrt(u + 1.5)
    if A == 0:
        # only when every resolvent root is -3/2, impossible for the cubic
        raise ArithmeticError("degenerate resolvent")
    roots = []
    for sgn in (1, -1):
        # xi^2 - sgn*A xi + u/2 - sgn*b/(2A) = 0
        p1 = -sgn * A
        p0 = u / 2 - sgn * b / (2 * A)
        disc = cmath.sqrt(p1 * p1 - 4 * p0)
        roots += [(-p1 + disc) / 2, (-p1 - disc) / 2]
    return tuple(r + 0.5 for r in roots)


def paper_root_formula(x: complex) -> tuple[complex, complex, complex, complex]:
    """The four displayed closed-form roots built on u0 = (8x(2x+1))^(1/3) - 1/2.

    Singular where (8x(2x+1))^(1/3) = -1.
    """
    x = complex(x)
    r = _cbrt(8 * x * (2 * x + 1))
    sq = cmath.sqrt(r + 1)
    out = []
    for sgn in (1, -1):
        inner = cmath.sqrt(-r * r + r + sgn * 2 * (4 * x + 1) * sq + 2)
        centre = sgn * (r + 1) / (2 * sq)
        for pm in (1, -1):
            out.append(centre + pm * inner / (2 * sq) + 0.5)
    return tuple(out)


# -- duality parameter scan ---------------------------------------------------------

# Monomials of the fourth-order form, as exponent vectors over (f, f', f'', f''', f'''').
FORM_MONOMIALS = (
    (3, 0, 0, 0, 1),
    (2, 1, 0, 1, 0),
    (2, 0, 2, 0, 0),
    (1, 2, 1, 0, 0),
    (0, 4, 0, 0, 0),
)
# The same form with the last monomial read as (f'')^4.
ALT_LAST_MONOMIAL = (0, 0, 4, 0, 0)

_DIFF_VARS = ("h0", "h1", "h2", "h3", "h4", "h5")


def chazy_form_vector(l: Poly, m: Poly) -> list[Poly]:
    """Coefficients of the fourth-order form obtained from y = l f'/f."""
    return [
        Poly.const(l.vars, 1),
        -2 * (l + 2),
        3 * (-12 * l * m + l - 1),
        12 * (l * l * m + 6 * l * m + 1),
        -(l**3 * m + 12 * l * l * m + 36 * l * m + l + 6),
    ]


def dual_form_vector(j: Poly, n: Poly) -> list[Poly]:
    """Displayed coefficients of the dual fourth-order form in (j, n)."""
    return [
        Poly.const(j.vars, 1),
        2 * j - 11,
        36 * j * n - 3 * j - 7,
        12 * j * j * n - 144 * j * n - 2 * j + 59,
        j**3 * n - 24 * j * j * n + 144 * j * n + 4 * j - 48,
    ]


class _Laurent:
    """Differential polynomial in h0..h5 divided by a power of h0."""

    def __init__(self, num: Poly, shift: int):
        self.num, self.shift = num, shift  # value = num * h0**(-shift)

    def d(self) -> "_Laurent":
        # D(num h0^-s) = (D num) h0^-s - s num h1 h0^(-s-1)
        dn = _total_derivative(self.num)
        h0, h1 = Poly.var("h0", _DIFF_VARS), Poly.var("h1", _DIFF_VARS)
        return _Laurent(dn * h0 - self.shift * self.num * h1, self.shift + 1)

    def __mul__(self, other: "_Laurent") -> "_Laurent":
        return _Laurent(self.num * other.num, self.shift + other.shift)


def _total_derivative(p: Poly) -> Poly:
    out = Poly(_DIFF_VARS)
    for mono, c in p.terms.items():
        for i, e in enumerate(mono):
            if e == 0:
                continue
            if i + 1 >= len(mono):
                raise ValueError("derivative order exceeds the tracked variables")
            new = list(mono)
            new[i] -= 1
            new[i + 1] += 1
            out = out + Poly(_DIFF_VARS, {tuple(new): c * e})
    return out


def _f_derivatives() -> list[_Laurent]:
    """f, f', ..., f'''' in terms of h under f = 1/h and d/dx = (1/h) d/dt."""
    one = Poly.const(_DIFF_VARS, 1)
    f = [_Laurent(one, 1)]
    for _ in range(4):
        g = f[-1].d()
        f.append(_Laurent(g.num, g.shift + 1))
    return f


def legendre_dual_form(coeffs: list, last_monomial: tuple = FORM_MONOMIALS[-1]) -> dict[tuple, object]:
    """Transform sum c_i * monomial_i in f to a differential polynomial in h.

    Returns a map from exponent vectors over (h, h', h'', h''', h'''') to
    coefficients, normalised so that h^3 h'''' has coefficient 1.  ``coeffs``
    may hold rationals or :class:`Poly` parameters.
    """
    monos = list(FORM_MONOMIALS[:-1]) + [last_monomial]
    fd = _f_derivatives()
    parts = []
    for mono in monos:
        acc = _Laurent(Poly.const(_DIFF_VARS, 1), 0)
        for i, e in enumerate(mono):
            for _ in range(e):
                acc = acc * fd[i]
        parts.append(acc)
    top = max(p.shift for p in parts)
    h0 = Poly.var("h0", _DIFF_VARS)
    out: dict[tuple, object] = {}
    for c, part in zip(coeffs, parts):
        num = part.num * h0 ** (top - part.shift)
        for mono, v in num.terms.items():
            out[mono[:5]] = out.get(mono[:5], 0) + c * v
    # drop common powers of h and normalise the leading monomial
    nz = {k: v for k, v in out.items() if not (isinstance(v, Poly) and v.is_zero()) and not (v == 0)}
    top_terms = [k for k in nz if k[1:] == (0, 0, 0, 1)]
    if not top_terms:
        raise ValueError("transformed form has no h'''' term")
    shift = top_terms[0][0] - 3
    # exponents of h may go negative here; such monomials lie outside the form
    nz = {(k[0] - shift,) + k[1:]: v for k, v in nz.items()}
    lead = nz.get((3, 0, 0, 0, 1))
    if lead is None:
        raise ValueError("transformed form has no h^3 h'''' term")
    return {k: _scale(v, lead) for k, v in nz.items()}


def _scale(v, lead):
    if isinstance(lead, Poly):
        if len(lead.terms) != 1 or lead.free_vars():
            raise ValueError("leading coefficient must be a constant")
        lead = next(iter(lead.terms.values()))
    return v / lead if isinstance(v, Poly) else _rat(v) / lead


def duality_system(reading: str = "f1") -> list[Poly]:
    """Polynomial equations in (l, m, j, n) for a Chazy form whose dual is a Chazy form.

    The dual of the (l, m) form is derived by exact substitution and matched
    monomial by monomial with the (j, n) form.  ``reading='f1'`` takes the
    last monomial as (f')^4; ``'f2'`` takes it as (f'')^4.
    """
    l, m, j, n = Poly.gens("l", "m", "j", "n")
    last = FORM_MONOMIALS[-1] if reading == "f1" else ALT_LAST_MONOMIAL
    if reading not in ("f1", "f2"):
        raise ValueError("reading must be 'f1' or 'f2'")
    derived = legendre_dual_form(chazy_form_vector(l, m), last)
    target = dict(zip(FORM_MONOMIALS, chazy_form_vector(j, n)))
    eqs = []
    for mono in set(derived) | set(target):
        lhs = derived.get(mono, Poly(l.vars))
        rhs = target.get(mono, Poly(l.vars))
        e = lhs - rhs
        if e:
            eqs.append(e)
    return eqs


def displayed_duality_system() -> list[Poly]:
    """Displayed dual vector in (j, n) matched against the Chazy form in (l, m)."""
    l, m, j, n = Poly.gens("l", "m", "j", "n")
    eqs = [a - b for a, b in zip(dual_form_vector(j, n), chazy_form_vector(l, m))]
    return [e for e in eqs if e]


def m_to_k(m: Fraction) -> tuple[Fraction, Fraction]:
    """(+k, -k) with m = 4/(36 - k^2); raises when k is irrational."""
    k2 = 36 - 4 / m
    num, den = k2.numerator, k2.denominator
    rn, rd = math.isqrt(num), math.isqrt(den) if den > 0 else 0
    if num < 0 or rn * rn != num or rd * rd != den:
        raise ValueError(f"k^2 = {k2} is not a rational square")
    k = Fraction(rn, rd)
    return k, -k


def duality_parameter_scan(reading: str = "f1", source: str = "derived") -> set[tuple[Fraction, Fraction]]:
    """Pairs (k, m), k > 0, for which the Legendre dual of a generalised Chazy
    equation is again a generalised Chazy equation.

    ``source='derived'`` transforms the fourth-order form exactly;
    ``source='displayed'`` uses the dual coefficient vector as printed.
    Solutions with l = 0 are excluded (the substitution y = l f'/f needs
    l != 0).  Each solution contributes both its m and its n.
    """
    if source == "derived":
        eqs = duality_system(reading)
    elif source == "displayed":
        eqs = displayed_duality_system()
    else:
        raise ValueError("source must be 'derived' or 'displayed'")
    sols = solve_rational(eqs, order=("n", "j", "m", "l"))
    out = set()
    for sol in sols:
        if sol["l"] == 0 or sol["j"] == 0:
            continue
        for key in ("m", "n"):
            k, _ = m_to_k(sol[key])
            out.add((k, sol[key]))
    return out


def duality_solutions(reading: str = "f1", source: str = "derived") -> list[dict[str, Fraction]]:
    eqs = duality_system(reading) if source == "derived" else displayed_duality_system()
    return [s for s in solve_rational(eqs, order=("n", "j", "m", "l")) if s["l"] != 0 and s["j"] != 0]


# -- the two displayed curves --------------------------------------------------------


def quartic_in_s() -> Poly:
    """s^4 - 2s^3 - 4xs + 2x over (s, x, y)."""
    s, x, _ = Poly.gens("s", "x", "y")
    return s**4 - 2 * s**3 - 4 * x * s + 2 * x


def sextic_displayed() -> Poly:
    """3 * (y s^6 - 3y s^5 + 3y s^4 - (40/3 - y) s^3 - 20 s^2 + 12 s - 8/3), as printed."""
    s, _, y = Poly.gens("s", "x", "y")
    return 3 * (y * s**6 - 3 * y * s**5 + 3 * y * s**4 - (Fraction(40, 3) - y) * s**3
                - 20 * s**2 + 12 * s - Fraction(8, 3))


def sextic_from_y() -> Poly:
    """3 y s^3 (s-1)^3 + 4 (2s-1)(5s^2-5s+2): the closed form of y cleared of denominators."""
    s, _, y = Poly.gens("s", "x", "y")
    return 3 * y * s**3 * (s - 1) ** 3 + 4 * (2 * s - 1) * (5 * s**2 - 5 * s + 2)


def p_curve(relation: str = "displayed") -> Poly:
    """Res_s of the quartic and the degree-6 y relation, over (x, y)."""
    rel = {"displayed": sextic_displayed, "derived": sextic_from_y}[relation]()
    return resultant(quartic_in_s(), rel, "s")


def p_curve_displayed() -> Poly:
    """The printed P(x, y) multiplied by x^3 (2x+1)^3."""
    x, y = Poly.gens("x", "y")
    q = 2 * x + 1
    return (x**3 * q**3 * y**4
            + 8 * (4 * x + 1) * x**2 * q**2 * y**3
            + Fraction(16, 3) * (70 * x**2 + 35 * x + 4) * x * q * y**2
            + Fraction(256, 27) * (10 * x + 1) * (5 * x + 2) * (4 * x + 1) * y
            + Fraction(64, 9) * (250 * x**2 + 125 * x + 316))


def oct_cubic() -> Poly:
    """t^3 (s^3 + 6 s^2 + 12 s + 8) - 8 s, i.e. the cubic for s(t) times t^3."""
    s, t, _ = Poly.gens("s", "t", "y")
    return t**3 * (s**3 + 6 * s**2 + 12 * s + 8) - 8 * s


def oct_y_relation() -> Poly:
    """32 (s-1)^2 y + 9 t^2 (s+2)^3 (s-10).

    From y = -(9/8)(s+2)(s-10) s^(2/3)/(s-1)^2 and s^(1/3) = t (s+2)/2.
    """
    s, t, y = Poly.gens("s", "t", "y")
    return 32 * (s - 1) ** 2 * y + 9 * t**2 * (s + 2) ** 3 * (s - 10)


def c_curve() -> Poly:
    return resultant(oct_cubic(), oct_y_relation(), "s")


def c_curve_displayed() -> Poly:
    t, y = Poly.gens("t", "y")
    a = 4 * t**2 + 6 * t + 9
    return ((2 * t - 3) ** 2 * a**2 * y**3
            + 18 * t * (2 * t - 3) * (2 * t**3 - 27) * a * y**2
            + 324 * t**2 * (t**6 - 45 * t**3 + 243) * y
            - 1458 * t**3 * (5 * t**3 - 108))


def reciprocal_in(p: Poly, name: str) -> Poly:
    """name^deg * p(1/name)."""
    i = p.index(name)
    d = p.degree(name)
    return Poly(p.vars, {m[:i] + (d - m[i],) + m[i + 1:]: c for m, c in p.terms.items()})


def same_up_to_scalar(p: Poly, q: Poly, strip_monomial: bool = True) -> bool:
    """Canonical text forms agree."""
    return p.canonical(strip_monomial).to_text() == q.canonical(strip_monomial).to_text()
