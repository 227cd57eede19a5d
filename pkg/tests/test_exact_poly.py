import cmath
from fractions import Fraction as Fr

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from chazy_lab import exact_poly as ep
from chazy_lab.exact_poly import Poly, PolyQ


def to_sympy(p: Poly):
    syms = sp.symbols(p.vars)
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**e for s, e in zip(syms, m)])
                    for m, c in p.terms.items()])


def from_sympy(expr, names) -> Poly:
    sp_poly = sp.Poly(sp.expand(expr), *sp.symbols(names))
    return Poly(names, {m: Fr(int(c.p), int(c.q)) for m, c in sp_poly.terms()})


small_int = st.integers(-6, 6)


def test_arithmetic_and_text():
    x, y = Poly.gens("x", "y")
    p = (x + 2 * y) ** 2 - 4 * y * y
    assert p.to_text() == "x^2 + 4*x*y"
    assert (p / 2).to_text() == "1/2*x^2 + 2*x*y"


def test_exact_division():
    x, y = Poly.gens("x", "y")
    assert ((x - y) * (x + y)).exact_div(x - y) == x + y
    with pytest.raises(ep.InexactDivision):
        (x * x + 1).exact_div(x - y)


def test_canonical_scalar_invariance():
    x, y = Poly.gens("x", "y")
    p = 3 * x**2 * y - Fr(9, 2) * y + 6
    assert p.canonical() == (Fr(-4, 7) * p).canonical()
    assert ep.same_up_to_scalar(p * x, Fr(5, 3) * p)
    assert not ep.same_up_to_scalar(p, p + 1)


def test_canonical_of_zero_raises():
    with pytest.raises(ep.ZeroPolynomial):
        Poly(("x",)).canonical()


def test_resultant_simple():
    s, x, y = Poly.gens("s", "x", "y")
    r = ep.resultant(s * s - x, s - y, "s")
    assert ep.same_up_to_scalar(r, from_sympy(sp.Symbol("y") ** 2 - sp.Symbol("x"), ("x", "y")))


@settings(max_examples=30, deadline=None)
@given(st.lists(small_int, min_size=4, max_size=4), st.lists(small_int, min_size=3, max_size=3),
       st.lists(small_int, min_size=3, max_size=3))
def test_resultant_matches_sympy(a, b, c):
    s, x, y = Poly.gens("s", "x", "y")
    p = s**3 + a[0] * x * s**2 + (a[1] + a[2] * y) * s + a[3] * x * y + 1
    q = s**2 + (b[0] + c[0] * x) * s + b[1] * y + c[1] * x * x + b[2] + c[2]
    mine = ep.resultant(p, q, "s")
    ref = sp.resultant(to_sympy(p), to_sympy(q), sp.Symbol("s"))
    assert mine == from_sympy(ref, ("x", "y"))


def test_resultant_vanishes_on_common_root():
    s, x, y = Poly.gens("s", "x", "y")
    # both vanish at s = x + y
    p = (s - x - y) * (s + 2)
    q = (s - x - y) * (s * s + x)
    r = ep.resultant(p, q, "s")
    assert r.is_zero()


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(small_int, min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_integer_matrix(rows):
    M = [[Poly.const(("x",), v) for v in r] for r in rows]
    trace = []
    det = ep.bareiss_det(M, trace)
    assert det.terms.get((0,), 0) == sp.Matrix(rows).det()
    # fraction-free: every pivot stays an integer
    assert all(c.denominator == 1 for piv in trace for c in piv.terms.values())


def test_bareiss_polynomial_matrix():
    x, = Poly.gens("x")
    M = [[x, 1, 2], [x * x, x - 1, 3], [1, x, x + 4]]
    M = [[e if isinstance(e, Poly) else Poly.const(("x",), e) for e in r] for r in M]
    ref = sp.Matrix([[to_sympy(e) for e in r] for r in M]).det()
    assert ep.bareiss_det(M) == from_sympy(ref, ("x",))


def test_polyq_rational_roots():
    p = PolyQ([Fr(-3, 2), Fr(7, 2), -1])  # -(x - 3)(x - 1/2)
    assert sorted(p.rational_roots()) == [Fr(1, 2), 3]


def test_polyq_gcd():
    a = PolyQ([-1, 0, 1])
    b = PolyQ([1, 2, 1])
    assert a.gcd(b) == PolyQ([1, 1])


def test_resolvent_at_one():
    roots = ep.resolvent_cubic_roots(1)
    assert roots[0] == pytest.approx(24 ** (1 / 3) - 0.5, rel=1e-14)
    for u in roots:
        assert abs(ep.resolvent_cubic(u, 1)) < 1e-12


def test_resolvent_at_zero():
    u = sp.Symbol("u")
    ref = sp.roots(sp.expand((u + sp.Rational(3, 2)) * (u**2 + sp.Rational(3, 4)) - 1), u, multiple=True)
    roots = ep.resolvent_cubic_roots(0)
    assert _multiset_distance(roots, [complex(r) for r in ref]) < 1e-12


def _multiset_distance(a, b):
    from itertools import permutations
    return min(max(abs(x - y) for x, y in zip(a, p)) for p in permutations(b))


def test_quartic_at_zero():
    roots = ep.quartic_by_radicals(0)
    assert _multiset_distance(roots, [0, 0, 0, 2]) < 1e-12


def test_quartic_at_one():
    roots = ep.quartic_by_radicals(1)
    ref = np.roots([1, -2, 0, -4, 2])
    assert _multiset_distance(roots, ref) < 1e-9
    assert max(ep.quartic_residual(s, 1) for s in roots) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_quartic_random(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        x = complex(*rng.normal(size=2))
        roots = ep.quartic_by_radicals(x)
        assert max(ep.quartic_residual(s, x) for s in roots) < 1e-10
        assert _multiset_distance(roots, np.roots(ep.quartic_poly(x)[::-1])) < 1e-9


def test_quartic_near_discriminant_locus():
    # within 1e-4 of each nonzero root of the discriminant in x
    x = sp.Symbol("x")
    s = sp.Symbol("s")
    disc = sp.discriminant(s**4 - 2 * s**3 - 4 * x * s + 2 * x, s)
    for r in sp.Poly(disc, x).nroots():
        r = complex(r)
        if abs(r) < 1e-12:
            continue
        xs = r + 1e-4 * cmath.exp(0.3j)
        roots = ep.quartic_by_radicals(xs)
        assert _multiset_distance(roots, np.roots(ep.quartic_poly(xs)[::-1])) < 1e-6


def test_displayed_root_formula_agrees():
    for x in (0.3, 1.0, -0.2 + 0.4j):
        assert _multiset_distance(ep.paper_root_formula(x), ep.quartic_by_radicals(x)) < 1e-9


def test_duality_scan():
    pairs = ep.duality_parameter_scan()
    assert {m for _, m in pairs} == {Fr(16, 135), Fr(9, 80)}
    assert {k for k, _ in pairs} == {Fr(3, 2), Fr(2, 3)}


def test_duality_scan_by_sympy():
    # independent solve of the same polynomial system
    eqs = [to_sympy(e) for e in ep.duality_system("f1")]
    l, m, j, n = sp.symbols("l m j n")
    sols = sp.solve(eqs, [l, m, j, n], dict=True)
    ms = {sol[m] for sol in sols if sol.get(l, 1) != 0 and sol.get(j, 1) != 0 and m in sol}
    assert ms == {sp.Rational(16, 135), sp.Rational(9, 80)}


def test_displayed_dual_vector_gives_same_scan():
    assert ep.duality_parameter_scan(source="displayed") == ep.duality_parameter_scan()


def test_second_reading_has_no_solutions():
    assert ep.duality_parameter_scan(reading="f2") == set()


def test_m_to_k():
    assert ep.m_to_k(Fr(16, 135)) == (Fr(3, 2), Fr(-3, 2))
    assert ep.m_to_k(Fr(9, 80)) == (Fr(2, 3), Fr(-2, 3))
    with pytest.raises(ValueError):
        ep.m_to_k(Fr(1, 7))


def test_p_curve_shape():
    P = ep.p_curve("derived")
    assert (P.degree("x"), P.degree("y")) == (6, 4)


def test_p_curve_vanishes_on_curve():
    P = ep.p_curve("derived")
    for s in (0.3 + 0.1j, -0.7 + 0.2j, 1.8 - 0.5j):
        x = s**3 * (s - 2) / (2 * (2 * s - 1))
        y = -4 * (2 * s - 1) * (5 * s * s - 5 * s + 2) / (3 * s**3 * (s - 1) ** 3)
        assert P.normalised_value({"x": x, "y": y}) < 1e-9


def test_p_curve_differs_from_display_in_one_coefficient():
    computed = ep.p_curve("derived").canonical(True)
    shown = ep.p_curve_displayed().canonical(True)
    diff = (computed - shown).canonical()
    assert len(diff.terms) == 1 and diff.free_vars() == ()


def test_c_curve_is_reciprocal_of_display():
    C = ep.c_curve()
    shown = ep.c_curve_displayed()
    assert ep.same_up_to_scalar(C, ep.reciprocal_in(shown, "t"))
    assert not ep.same_up_to_scalar(C, shown)


def test_c_curve_vanishes_on_curve():
    C = ep.c_curve()
    for s in (0.3 + 0.1j, 2.5 - 0.4j):
        t = 2 * s ** (1 / 3) / (s + 2)
        y = -(9 / 32) * t * t * (s + 2) ** 3 * (s - 10) / (s - 1) ** 2
        assert C.normalised_value({"t": t, "y": y}) < 1e-9


def test_solve_rational_small_system():
    x, y = Poly.gens("x", "y")
    sols = ep.solve_rational([x * y - 6, x + y - 5])
    assert sorted((s["x"], s["y"]) for s in sols) == [(2, 3), (3, 2)]
