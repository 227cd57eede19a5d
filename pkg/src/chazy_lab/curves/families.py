"""Evaluating catalogued families as jets and verifying them."""

from __future__ import annotations

import cmath
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import jet as J
from .. import ode, schwarz
from ..jet import Jet
from . import expr
from .catalogue import CurveFamily, RootContinuation, get

DEFAULT_TOL = 1e-8


class OutsideDomain(ValueError):
    pass


# -- reports ---------------------------------------------------------------------


@dataclass
class CheckResult:
    family: str
    check: str
    k: Fraction | None
    values: list[float] = field(default_factory=list)
    tol: float = DEFAULT_TOL
    # "upper": every value must be below tol; "lower": every value above it
    bound: str = "upper"

    def add(self, v: float) -> None:
        self.values.append(float(v))

    @property
    def samples(self) -> int:
        return len(self.values)

    @property
    def max(self) -> float:
        return max(self.values) if self.values else math.nan

    @property
    def mean(self) -> float:
        return sum(self.values) / len(self.values) if self.values else math.nan

    @property
    def passed(self) -> bool:
        if not self.values:
            return False
        if self.bound == "lower":
            return all(v > self.tol for v in self.values)
        return all(v < self.tol for v in self.values)

    @property
    def min(self) -> float:
        return min(self.values) if self.values else math.nan

    def as_record(self) -> dict:
        return {
            "family": self.family,
            "check": self.check,
            "k": None if self.k is None else str(self.k),
            "samples": self.samples,
            "max": self.max,
            "mean": self.mean,
            "min": self.min,
            "tolerance": self.tol,
            "bound": self.bound,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    family: str
    seed: int
    samples: int
    checks: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.check == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.check for c in self.checks]

    def merge(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)


class _Checks:
    """Collects values per check name in first-seen order."""

    def __init__(self, family: str, k, tol: float):
        self.family, self.k, self.tol = family, k, tol
        self._by_name: dict[str, CheckResult] = {}

    def add(self, name: str, value: float, k=None) -> None:
        if name not in self._by_name:
            self._by_name[name] = CheckResult(self.family, name, self.k if k is None else k, tol=self.tol)
        self._by_name[name].add(value)

    def results(self) -> list[CheckResult]:
        return list(self._by_name.values())


def rel_diff(a: complex, b: complex) -> float:
    scale = abs(a) + abs(b)
    return abs(a - b) / scale if scale else 0.0


def jet_rel_diff(a: Jet, b: Jet, upto: int | None = None) -> float:
    n = min(a.order, b.order) if upto is None else upto
    da, db = a.coeffs[: n + 1], b.coeffs[: n + 1]
    scale = float(np.max(np.abs(da)) + np.max(np.abs(db)))
    return float(np.max(np.abs(da - db))) / scale if scale else 0.0


# -- sampling --------------------------------------------------------------------


def family_rng(fam: CurveFamily, seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(fam.id.encode())])


def sample_points(fam: CurveFamily, n: int, seed: int = 0) -> list[complex]:
    """Deterministic parameter values in the family's sample region."""
    rng = family_rng(fam, seed)
    sp = fam.sampling
    out = []
    while len(out) < n:
        if sp.interval is not None:
            lo, hi = sp.interval
            p = complex(rng.uniform(lo, hi))
        else:
            r_in, r_out = sp.radii
            rho = math.sqrt(rng.uniform(r_in**2, r_out**2))
            p = sp.center + rho * cmath.exp(2j * math.pi * rng.uniform())
        if all(abs(p - z) >= sp.clearance for z in fam.singularities):
            out.append(p)
    return out


# -- evaluation ------------------------------------------------------------------


@dataclass
class FamilyJets:
    """Jets of one family at one parameter value.

    ``*_p`` are jets in the curve parameter; the rest are jets in the
    independent variable at ``var_value``.
    """

    param_value: complex
    var_value: complex
    x_p: Jet
    inverse: Jet
    s: Jet | None = None
    y_recipe: Jet | None = None
    y_table: Jet | None = None
    y_param: Jet | None = None
    F: Jet | None = None
    H: Jet | None = None

    def in_var(self, p_jet: Jet) -> Jet:
        return J.compose(p_jet, self.inverse)


def _env(fam: CurveFamily, p_jet) -> dict:
    return {fam.param: p_jet, **fam.constant_values()}


def eval_param(fam: CurveFamily, name: str, p_jet):
    text = getattr(fam, name)
    if text is None:
        raise KeyError(f"{fam.id} has no {name}")
    return expr.evaluate(text, _env(fam, p_jet))


def eval_family(fam: CurveFamily | str, p: complex, order: int = J.DEFAULT_ORDER) -> FamilyJets:
    """Jets of every quantity the family defines at parameter value ``p``."""
    if isinstance(fam, str):
        fam = get(fam)
    p = complex(p)
    for z in fam.singularities:
        if abs(p - z) < 1e-12:
            raise OutsideDomain(f"{fam.id}: parameter {p} is a listed singularity")
    P = Jet.variable(p, order)
    x_p = eval_param(fam, "x", P)
    if not isinstance(x_p, Jet):
        raise OutsideDomain(f"{fam.id}: x does not depend on the parameter")
    try:
        inv = J.revert(x_p)
    except J.NonInvertibleSeries as exc:
        raise OutsideDomain(f"{fam.id}: x is critical at {p}") from exc
    out = FamilyJets(p, x_p.value, x_p, inv)
    if fam.s is not None:
        out.s = J.compose(eval_param(fam, "s", P), inv)
        if fam.recipe is not None:
            out.y_recipe = schwarz.chazy_from_schwarz(fam.recipe, out.s)
    if fam.y is not None:
        X = Jet.variable(x_p.value, order)
        out.y_table = expr.evaluate(fam.y, {fam.var: X, **fam.constant_values()})
    if fam.y_param is not None:
        out.y_param = out.in_var(eval_param(fam, "y_param", P))
    if fam.F is not None:
        out.F = out.in_var(eval_param(fam, "F", P))
    if fam.H is not None:
        out.H = out.in_var(eval_param(fam, "H", P))
    return out


def _root_continuation(fam: CurveFamily, rc: RootContinuation, target: complex, steps: int = 24) -> complex:
    """Follow the root of the polynomial from the anchor to ``target``.

    At the anchor the root is the anchor parameter itself; at each step the
    root nearest the previous one is kept (ties broken by (re, im)).
    """
    consts = fam.constant_values()
    x0 = complex(eval_param(fam, "x", fam.anchor))
    root = fam.anchor if rc.unknown == fam.param else complex(
        expr.evaluate(rc.unknown, {fam.param: fam.anchor, **consts}))
    for i in range(1, steps + 1):
        xv = x0 + (target - x0) * i / steps
        coeffs = [complex(expr.evaluate(c, {fam.var: xv, **consts})) for c in rc.poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        roots = np.roots(coeffs[::-1])
        root = min(roots, key=lambda z: (round(abs(z - root), 12), z.real, z.imag))
    return complex(root)


def inverse_closed_form(fam: CurveFamily, xv: complex) -> complex:
    """Value of s at ``var = xv`` from the family's closed-form inverse."""
    if fam.s_of_x is None:
        raise KeyError(f"{fam.id} has no closed-form inverse")
    if isinstance(fam.s_of_x, RootContinuation):
        rc = fam.s_of_x
        root = _root_continuation(fam, rc, xv)
        return complex(expr.evaluate(rc.then, {rc.unknown: root, **fam.constant_values()}))
    return complex(expr.evaluate(fam.s_of_x, {fam.var: xv, **fam.constant_values()}))


def newton_parameter(fam: CurveFamily, xv: complex, seed: complex | None = None) -> complex:
    """Parameter p with x(p) = xv, by Newton iteration and homotopy from ``seed``."""
    def fwd(p0):
        return eval_param(fam, "x", Jet.variable(p0, 1))
    seed = fam.anchor if seed is None else seed
    return schwarz.invert_triangle_map(None, xv, seed, forward=fwd)


# -- verification -------------------------------------------------------------------


def _y_from_second_derivative(G: Jet, factor) -> Jet:
    """factor * (log G'')' as a jet."""
    g2 = G.derivative().derivative()
    return factor * (g2.derivative() / g2.truncate(g2.order - 1))


def verify_point(fam: CurveFamily, p: complex, checks: _Checks, order: int) -> None:
    fj = eval_family(fam, p, order)
    k = fam.k
    ys = []
    if fj.s is not None:
        checks.add("schwarz", ode.normalised(schwarz.schwarz_terms(fam.angles, fj.s)), k=None)
    if fj.y_recipe is not None:
        checks.add("chazy/recipe", ode.normalised(ode.chazy_terms(k, fj.y_recipe)))
        ys.append(fj.y_recipe)
    ref = fj.y_recipe
    if fj.y_table is not None:
        checks.add("chazy/tabulated-y", ode.normalised(ode.chazy_terms(k, fj.y_table)))
        if ref is not None:
            checks.add("y/tabulated-vs-recipe", rel_diff(fj.y_table.value, ref.value))
        ref = ref if ref is not None else fj.y_table
        ys.append(fj.y_table)
    if fj.y_param is not None:
        checks.add("chazy/parametric-y", ode.normalised(ode.chazy_terms(k, fj.y_param)))
        if ref is not None:
            checks.add("y/parametric-vs-reference", rel_diff(fj.y_param.value, ref.value))
        ref = ref if ref is not None else fj.y_param
        ys.append(fj.y_param)
    if fj.F is not None:
        checks.add("ode6/F", ode.normalised(ode.ode6_terms(fj.F)), k=None)
        yF = _y_from_second_derivative(fj.F, 2)
        checks.add("chazy/y-from-F", ode.normalised(ode.chazy_terms(k, yF)))
        if ref is not None:
            checks.add("y/F-vs-reference", rel_diff(yF.value, ref.value))
        X = Jet.variable(fj.var_value, order)
        t, H = ode.legendre_dual(X, fj.F)
        checks.add("noth/dual-of-F", ode.normalised(ode.noth_terms(ode.as_graph(t, H))), k=None)
    if fj.H is not None:
        checks.add("noth/H", ode.normalised(ode.noth_terms(fj.H)), k=None)
        yH = _y_from_second_derivative(fj.H, Fraction(3, 2))
        checks.add("chazy/y-from-H", ode.normalised(ode.chazy_terms(k, yH)))
        if ref is not None:
            checks.add("y/H-vs-reference", rel_diff(yH.value, ref.value))
        T = Jet.variable(fj.var_value, order)
        xd, Fd = ode.legendre_dual(T, fj.H)
        checks.add("ode6/dual-of-H", ode.normalised(ode.ode6_terms(ode.as_graph(xd, Fd))), k=None)
    if ys and k == Fraction(2, 3):
        Fi = ode.integrate_twice_exp(ys[0], Fraction(1, 2))
        checks.add("ode6/integrated-y", ode.normalised(ode.ode6_terms(Fi)), k=None)
    if ys and k == Fraction(3, 2):
        Hi = ode.integrate_twice_exp(ys[0], Fraction(2, 3))
        checks.add("noth/integrated-y", ode.normalised(ode.noth_terms(Hi)), k=None)
    if fam.s_of_x is not None and fj.s is not None:
        checks.add("s/closed-form-inverse", rel_diff(inverse_closed_form(fam, fj.var_value), fj.s.value), k=None)
        if isinstance(fam.s_of_x, str):
            pn = newton_parameter(fam, fj.var_value)
            s_newton = complex(eval_param(fam, "s", pn))
            closed = inverse_closed_form(fam, fj.var_value)
            checks.add("s/newton-vs-closed-form", rel_diff(s_newton, closed), k=None)
    if fam.s_relation is not None and fj.s is not None:
        env = {"s": fj.s.value, fam.var: fj.var_value, **fam.constant_values()}
        for name, text in fam.s_relation_subs.items():
            env[name] = expr.evaluate(text, env)
        checks.add("s/implicit-relation", _relation_residual(fam.s_relation, env), k=None)


def _relation_residual(text: str, env: dict) -> float:
    """|lhs - rhs| / (|lhs| + |rhs|) for a relation written as ``lhs - rhs``."""
    import ast

    tree = expr.parse(text).body
    if isinstance(tree, ast.BinOp) and isinstance(tree.op, ast.Sub):
        lhs = expr._eval(tree.left, env, text)
        rhs = expr._eval(tree.right, env, text)
        return rel_diff(complex(lhs), complex(rhs))
    return abs(complex(expr.evaluate(text, env)))


def verify_family(fam: CurveFamily | str, samples: int = 64, seed: int = 0,
                  order: int = J.DEFAULT_ORDER, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Run every applicable residual check at ``samples`` seeded points."""
    if isinstance(fam, str):
        fam = get(fam)
    checks = _Checks(fam.id, fam.k, tol)
    report = VerificationReport(fam.id, seed, samples)
    for p in sample_points(fam, samples, seed):
        try:
            verify_point(fam, p, checks, order)
        except (ArithmeticError, ValueError) as exc:
            checks.add("evaluation", math.inf, k=None)
            report.notes.append(f"{fam.id} at {p}: {type(exc).__name__}: {exc}")
    report.checks = checks.results()
    return report
