"""A small, safe evaluator for closed-form expressions over the jet algebra.

Catalogue entries store formulas such as ``"2**(2/3)*((1-r)/(1+r))**(1/3)"``.
They are parsed with :mod:`ast`, restricted to arithmetic, a fixed set of
functions and named values, and evaluated on numbers or jets.  Rational
literals stay exact until they meet a float, so exponents like ``1/3`` are
recognised as rationals.
"""

from __future__ import annotations

import ast
import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .. import jet as J
from ..hyp2f1 import HypParams, hyp2f1, hyp2f1_jet
from ..jet import BranchSpec, Jet

W = cmath.exp(2j * math.pi / 3)

CONSTANTS = {"w": W, "i": 1j, "pi": math.pi}


class ExpressionError(ValueError):
    pass


def _cx(v) -> complex:
    return complex(float(v)) if isinstance(v, Fraction) else complex(v)


def _scalar_pow(base, r, sheet: int = 0):
    if isinstance(r, Fraction) and r.denominator == 1:
        n = int(r)
        if isinstance(base, Fraction):
            return base**n
        return _cx(base) ** n
    b = _cx(base)
    if b == 0:
        return 0j
    return cmath.exp(_cx(r) * (cmath.log(b) + 2j * math.pi * sheet))


def _pow(base, r, sheet: int = 0):
    if isinstance(r, Jet):
        raise ExpressionError("exponents must be constants")
    if isinstance(base, Jet):
        if isinstance(r, Fraction) and r.denominator == 1 and sheet == 0:
            return base ** int(r)
        return J.power(base, _cx(r) if not isinstance(r, Fraction) else r, BranchSpec(sheet=sheet))
    return _scalar_pow(base, r, sheet)


def _unary(fn_jet, fn_scalar):
    def f(v):
        if isinstance(v, Jet):
            return fn_jet(v)
        return fn_scalar(_cx(v))
    return f


def _hyp(a, b, c, z):
    p = HypParams(*(v if isinstance(v, Fraction) else _cx(v) for v in (a, b, c)))
    if isinstance(z, Jet):
        return J.compose(hyp2f1_jet(p, z.value, z.order), z)
    return hyp2f1(p, _cx(z))


FUNCTIONS = {
    "sqrt": lambda v, sheet=0: _pow(v, Fraction(1, 2), int(sheet)),
    "cbrt": lambda v, sheet=0: _pow(v, Fraction(1, 3), int(sheet)),
    "pow": lambda v, r, sheet=0: _pow(v, r, int(sheet)),
    "exp": _unary(J.exp, cmath.exp),
    "log": _unary(J.log, cmath.log),
    "sin": _unary(J.sin, cmath.sin),
    "cos": _unary(J.cos, cmath.cos),
    "tan": _unary(J.tan, cmath.tan),
    "hyp": _hyp,
}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _mixed(op, a, b):
    # Fractions and complex numbers do not mix under Python's operators.
    if isinstance(a, Fraction) and isinstance(b, complex):
        a = _cx(a)
    elif isinstance(b, Fraction) and isinstance(a, complex):
        b = _cx(b)
    if isinstance(a, Jet) and isinstance(b, Fraction):
        b = _cx(b)
    elif isinstance(b, Jet) and isinstance(a, Fraction):
        a = _cx(a)
    return op(a, b)


@lru_cache(maxsize=None)
def parse(text: str) -> ast.Expression:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc}") from None
    for node in ast.walk(tree):
        if isinstance(node, (ast.Expression, ast.Load, ast.operator, ast.unaryop)):
            continue
        if isinstance(node, (ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Call)):
            continue
        raise ExpressionError(f"disallowed syntax {type(node).__name__} in {text!r}")
    return tree


def evaluate(text: str, env: dict):
    """Evaluate ``text`` with variables from ``env`` (numbers or jets)."""
    return _eval(parse(text).body, env, text)


def _eval(node, env, text):
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float, complex)):
            raise ExpressionError(f"bad literal {v!r} in {text!r}")
        if isinstance(v, int):
            return Fraction(v)
        return v
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        if node.id in CONSTANTS:
            return CONSTANTS[node.id]
        raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env, text)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ExpressionError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, env, text)
        b = _eval(node.right, env, text)
        if isinstance(node.op, ast.Pow):
            return _pow(a, b)
        try:
            op = _BINOPS[type(node.op)]
        except KeyError:
            raise ExpressionError(f"unsupported operator in {text!r}") from None
        return _mixed(op, a, b)
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS or node.keywords:
            raise ExpressionError(f"unsupported call in {text!r}")
        args = [_eval(a, env, text) for a in node.args]
        return FUNCTIONS[node.func.id](*args)
    raise ExpressionError(f"unsupported node in {text!r}")


def names(text: str) -> set[str]:
    return {n.id for n in ast.walk(parse(text)) if isinstance(n, ast.Name)} - set(FUNCTIONS)
