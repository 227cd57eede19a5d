"""Worked pipelines: a (1/3, 1/3, 3) family for k = 2/3 and two k = 3/2 families with their duals."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import exact_poly as ep
from .. import jet as J
from .. import ode
from ..jet import Jet
from ..schwarz import SingularPoint
from . import expr
from .families import DEFAULT_TOL, CheckResult, VerificationReport, jet_rel_diff, rel_diff

K23 = Fraction(2, 3)
K32 = Fraction(3, 2)


@dataclass
class Pipeline:
    """Jets along one pipeline at one parameter value.

    ``param`` holds jets in the curve parameter, ``graph`` jets of each
    quantity as a function of the pipeline's independent variable.
    """

    name: str
    value: complex
    param: dict[str, Jet] = field(default_factory=dict)
    graph: dict[str, Jet] = field(default_factory=dict)
    checks: dict[str, float] = field(default_factory=dict)


def _jets(texts: dict[str, str], name: str, p: complex, order: int) -> dict[str, Jet]:
    P = Jet.variable(p, order)
    return {k: expr.evaluate(v, {name: P}) for k, v in texts.items()}


def _avoid(p: complex, bad, what: str) -> None:
    for z in bad:
        if abs(p - z) < 1e-9:
            raise SingularPoint(f"{what} = {p} is excluded")


def _involution(x: Jet, F: Jet) -> float:
    """Distance of the dual of the dual from the original parametrised curve.

    Compared through fourth order; the top coefficients of a twice
    differentiated jet carry most of the rounding.
    """
    t, H = ode.legendre_dual(x, F)
    x2, F2 = ode.legendre_dual(t, H)
    n = min(4, x2.order)
    return max(jet_rel_diff(x2, x, upto=n), jet_rel_diff(F2, F, upto=n))


@lru_cache(maxsize=None)
def _curve(name: str) -> ep.Poly:
    return {"P": lambda: ep.p_curve("derived"), "C": ep.c_curve}[name]()


# -- s333: k = 2/3, angles (1/3, 1/3, 3) ------------------------------------------

S333 = {
    "x": "s**3*(s-2)/(2*(2*s-1))",
    "y": "-4*(2*s-1)*(5*s**2-5*s+2)/(3*s**3*(s-1)**3)",
    "F2": "(2*s-1)**3/(s**4*(s-1)**4)",
    "F1": "3*(1/s-1/(s-1))",
    "F": "-9/4*s-9/(8*(2*s-1))",
    "t_closed": "4*c/3*(1/(s-1)-1/s)",
    "H_closed": "-c*(1/6+2*s/3+2/(3*(s-1)))",
}
XI_FORM = "-128/3*xi*(20*xi**2+3)/((2*xi-1)**3*(2*xi+1)**3)"


def s333_pipeline(s: complex, order: int = 10) -> Pipeline:
    s = complex(s)
    _avoid(s, (0, 1, 0.5), "s")
    pj = _jets({k: v for k, v in S333.items() if not k.endswith("_closed")}, "s", s, order)
    inv = J.revert(pj["x"])
    g = {k: J.compose(v, inv) for k, v in pj.items() if k != "x"}
    out = Pipeline("s333", s, pj, g)
    c = out.checks
    c["chazy/y"] = ode.normalised(ode.chazy_terms(K23, g["y"]))
    c["F'=F1"] = jet_rel_diff(g["F"].derivative(), g["F1"], upto=order - 3)
    c["F1'=F2"] = jet_rel_diff(g["F1"].derivative(), g["F2"], upto=order - 3)
    y_from_F2 = 2 * g["F2"].derivative() / g["F2"].truncate(order - 1)
    c["y=2(log F2)'"] = jet_rel_diff(y_from_F2, g["y"], upto=order - 4)
    c["y/xi-form"] = rel_diff(expr.evaluate(XI_FORM, {"xi": s - 0.5}), pj["y"].value)
    c["ode6/F"] = ode.normalised(ode.ode6_terms(g["F"]))
    t, H = ode.legendre_dual(pj["x"], pj["F"])
    out.param.update(t=t, H=H)
    out.graph["H"] = ode.as_graph(t, H)
    c["noth/dual"] = ode.normalised(ode.noth_terms(out.graph["H"]))
    cval = Fraction(-9, 4)
    closed = {k: expr.evaluate(v, {"s": s, "c": cval}) for k, v in S333.items() if k.endswith("_closed")}
    c["dual/closed-form"] = max(rel_diff(t.value, closed["t_closed"]), rel_diff(H.value, closed["H_closed"]))
    c["dual/involution"] = _involution(pj["x"], pj["F"])
    vals = {"x": pj["x"].value, "y": pj["y"].value}
    c["P(x,y)/resultant"] = _curve("P").normalised_value(vals)
    return out


# -- oct: k = 3/2 curve with H^3 - 16 t^3 - 8 H t = 0 --------------------------------

OCT = {
    "t": "2*s**(1/3)/(s+2)",
    "y": "-9/8*(s+2)*(s-10)*s**(2/3)/(s-1)**2",
    "H": "-4*s**(2/3)/(s+2)",
}
OCT_DUAL = {"x": "-(s-4)*s**(1/3)/(s-1)", "F": "2*s**(2/3)/(s-1)"}


def oct_pipeline(s: complex, order: int = 10) -> Pipeline:
    s = complex(s)
    _avoid(s, (-2, 0, 1), "s")
    pj = _jets(OCT, "s", s, order)
    inv = J.revert(pj["t"])
    g = {k: J.compose(pj[k], inv) for k in ("y", "H")}
    out = Pipeline("oct", s, pj, g)
    c = out.checks
    tv, Hv = pj["t"].value, pj["H"].value
    terms = [Hv**3, -16 * tv**3, -8 * Hv * tv]
    c["H^3-16t^3-8Ht"] = ode.normalised(terms)
    c["chazy/y"] = ode.normalised(ode.chazy_terms(K32, g["y"]))
    c["noth/H"] = ode.normalised(ode.noth_terms(g["H"]))
    H2 = g["H"].derivative().derivative()
    c["y=(3/2)(log H'')'"] = rel_diff((K32 * H2.derivative() / H2.truncate(H2.order - 1)).value, g["y"].value)
    x, F = ode.legendre_dual(pj["t"], pj["H"])
    out.param.update(x=x, F=F)
    out.graph["F"] = ode.as_graph(x, F)
    closed = {k: expr.evaluate(v, {"s": s}) for k, v in OCT_DUAL.items()}
    c["dual/closed-form"] = max(rel_diff(x.value, closed["x"]), rel_diff(F.value, closed["F"]))
    c["ode6/dual"] = ode.normalised(ode.ode6_terms(out.graph["F"]))
    c["dual/involution"] = _involution(pj["t"], pj["H"])
    cubic = [s**3, 6 * s**2, (12 - 8 / tv**3) * s, 8]
    c["s/cubic-in-t"] = ode.normalised(cubic)
    c["C(t,y)/resultant"] = _curve("C").normalised_value({"t": tv, "y": pj["y"].value})
    return out


# -- lmn: k = 3/2 family parametrised by tau -------------------------------------------

LMN = {
    "t": "16*tau**(2/3)/(9*(1+2*tau))",
    "y": "81/64*(1+2*tau)*(10*tau-1)/(tau**(2/3)*(tau-1)**2)",
    "H": "1024/81*tau**(1/3)/(1+2*tau)",
}
LMN_DUAL = {"x": "32*(4*tau-1)/(9*tau**(1/3)*(tau-1))", "F": "512/81*tau**(1/3)/(tau-1)"}


def lmn_pipeline(tau: complex, order: int = 10) -> Pipeline:
    tau = complex(tau)
    _avoid(tau, (0, 1, -0.5), "tau")
    pj = _jets(LMN, "tau", tau, order)
    inv = J.revert(pj["t"])
    g = {k: J.compose(pj[k], inv) for k in ("y", "H")}
    out = Pipeline("lmn", tau, pj, g)
    c = out.checks
    c["chazy/y"] = ode.normalised(ode.chazy_terms(K32, g["y"]))
    c["noth/H"] = ode.normalised(ode.noth_terms(g["H"]))
    Hi = ode.integrate_twice_exp(g["y"], Fraction(2, 3))
    c["noth/integrated-y"] = ode.normalised(ode.noth_terms(Hi))
    H2 = g["H"].derivative().derivative()
    c["y=(3/2)(log H'')'"] = rel_diff((K32 * H2.derivative() / H2.truncate(H2.order - 1)).value, g["y"].value)
    x, F = ode.legendre_dual(pj["t"], pj["H"])
    out.param.update(x=x, F=F)
    out.graph["F"] = ode.as_graph(x, F)
    closed = {k: expr.evaluate(v, {"tau": tau}) for k, v in LMN_DUAL.items()}
    c["dual/closed-form"] = max(rel_diff(x.value, closed["x"]), rel_diff(F.value, closed["F"]))
    c["ode6/dual"] = ode.normalised(ode.ode6_terms(out.graph["F"]))
    c["dual/involution"] = _involution(pj["t"], pj["H"])
    return out


PIPELINES = {"s333": (s333_pipeline, (0, 1, 0.5)),
             "oct": (oct_pipeline, (-2, 0, 1)),
             "lmn": (lmn_pipeline, (0, 1, -0.5))}


def pipeline_points(name: str, n: int, seed: int = 0, clearance: float = 0.1) -> list[complex]:
    """Seeded points in the box |Re| <= 2, |Im| <= 1 away from the excluded values.

    The real axis is avoided too, so the principal cube roots stay smooth.
    """
    _, bad = PIPELINES[name]
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    out = []
    while len(out) < n:
        p = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        if abs(p.imag) > clearance and all(abs(p - z) > clearance for z in bad):
            out.append(p)
    return out


def verify_pipeline(name: str, samples: int = 64, seed: int = 0, order: int = 10,
                    tol: float = DEFAULT_TOL) -> VerificationReport:
    fn, _ = PIPELINES[name]
    report = VerificationReport(name, seed, samples)
    by_name: dict[str, CheckResult] = {}
    for p in pipeline_points(name, samples, seed):
        for check, v in fn(p, order).checks.items():
            by_name.setdefault(check, CheckResult(name, check, None, tol=tol)).add(v)
    report.checks = list(by_name.values())
    return report


def displayed_curve_checks(samples: int = 16, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    """Evaluate the printed P(x, y) and C(t, y) on points of their curves.

    Also compares them with the resultants computed here, up to a rational
    scalar.
    """
    report = VerificationReport("displays", seed, samples)
    pd, cd = ep.p_curve_displayed(), ep.c_curve_displayed()
    rp = CheckResult("displays", "P(x,y)/printed", None, tol=tol)
    rc = CheckResult("displays", "C(t,y)/printed", None, tol=tol)
    for s in pipeline_points("s333", samples, seed):
        pl = s333_pipeline(s, order=8)
        rp.add(pd.normalised_value({"x": pl.param["x"].value, "y": pl.param["y"].value}))
    for s in pipeline_points("oct", samples, seed):
        pl = oct_pipeline(s, order=8)
        rc.add(cd.normalised_value({"t": pl.param["t"].value, "y": pl.param["y"].value}))
    exact_p = CheckResult("displays", "P(x,y)/resultant-equals-printed", None, tol=0.5)
    exact_p.add(0.0 if ep.same_up_to_scalar(_curve("P"), pd) else 1.0)
    exact_c = CheckResult("displays", "C(t,y)/resultant-equals-printed", None, tol=0.5)
    exact_c.add(0.0 if ep.same_up_to_scalar(_curve("C"), cd) else 1.0)
    report.checks = [rp, exact_p, rc, exact_c]
    return report
