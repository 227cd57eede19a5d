"""Independent reference computations shared by the test modules."""

from __future__ import annotations

import cmath
import re
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from chazy_lab.curves import catalogue
from chazy_lab.schwarz import angles_to_abc

_HYP_CALL = re.compile(r"hyp\(([^,()]+),([^,()]+),([^,()]+),")


def catalogue_triples() -> list[tuple[Fraction, Fraction, Fraction]]:
    """Every (a, b, c) the shipped catalogue evaluates, either through a
    triangle map (both quotient solutions) or through a literal hyp() call."""
    out = set()
    for fam in catalogue.load():
        if fam.angles is not None:
            p = angles_to_abc(fam.angles)
            out.add(p.as_tuple())
            out.add(p.second_solution().as_tuple())
        for text in fam.expressions().values():
            for m in _HYP_CALL.finditer(text):
                out.add(tuple(Fraction(g.strip()) for g in m.groups()))
    return sorted(out)


def _taylor_start(a, b, c, z: complex, terms: int = 12) -> tuple[complex, complex]:
    val, der, term = 1.0 + 0j, 0j, 1.0 + 0j
    for n in range(terms):
        if (a + n) * (b + n) == 0:
            break  # terminating series
        term_next = term * (a + n) * (b + n) / ((c + n) * (n + 1))
        der += term_next * (n + 1) * z**n
        term = term_next
        val += term * z ** (n + 1)
    return val, der


def hyp2f1_by_integration(a, b, c, z: complex, r0: float = 0.1) -> complex:
    """2F1(a, b; c; z) by integrating the hypergeometric equation along the
    ray from the origin with an 8th-order Dormand-Prince scheme."""
    a, b, c = (complex(float(v)) for v in (a, b, c))
    z = complex(z)
    if abs(z) <= r0:
        return _taylor_start(a, b, c, z, 30)[0]
    e = z / abs(z)
    y0 = np.array(_taylor_start(a, b, c, r0 * e, 60), dtype=complex)

    def rhs(r, y):
        w = r * e
        f, fp = y
        fpp = (a * b * f - (c - (a + b + 1) * w) * fp) / (w * (1 - w))
        return [e * fp, e * fpp]

    sol = solve_ivp(rhs, (r0, abs(z)), y0, method="DOP853", rtol=1e-13, atol=1e-15)
    if not sol.success:
        raise RuntimeError(sol.message)
    return complex(sol.y[0, -1])


ORACLE_POINTS = (0.5, -0.7, 0.3j, 0.8 * cmath.exp(0.4j), 0.8 * cmath.exp(2.2j),
                 0.8 * cmath.exp(-1.3j), 0.6 - 0.45j, -0.2 + 0.1j)
