"""
Expression algebra over chart coordinates

Expressions are sympy objects built from rationals, coordinate symbols,
sums, products, integer powers and the opaque square root ``Sqrt``.
"""

import math
import logging
from typing import Dict, Iterable, Mapping, Union

import sympy as sp
from sympy import integer_nthroot

from poissonlift.exceptions import EvaluationError, FragmentError

logger = logging.getLogger(__name__)

Expr = sp.Expr
ExprLike = Union[sp.Expr, int, str]


class Sqrt(sp.Function):
    """Square root kept as an opaque node

    sqrt(u)*sqrt(u) stays a power of the node and is never rewritten to u,
    so identities that need that rewrite fall to the randomized zero test.
    """

    nargs = 1

    @classmethod
    def eval(cls, arg):
        if arg.is_Rational and arg >= 0:
            num, exact_num = integer_nthroot(int(arg.p), 2)
            den, exact_den = integer_nthroot(int(arg.q), 2)
            if exact_num and exact_den:
                return sp.Rational(num, den)
        return None

    def fdiff(self, argindex=1):
        return sp.Rational(1, 2) / Sqrt(self.args[0])


def symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name)


def as_expr(value: ExprLike) -> sp.Expr:
    """Coerce ints, rationals and expressions; strings go through the parser"""
    if isinstance(value, str):
        from poissonlift.symexpr.parser import parse

        return parse(value)
    if isinstance(value, float):
        raise TypeError("float literals are not exact; pass a string or a Rational")
    return sp.sympify(value)


def has_sqrt(e: sp.Expr) -> bool:
    return bool(sp.sympify(e).has(Sqrt))


def free_coordinates(e: sp.Expr) -> list:
    """Names of the coordinates an expression depends on, sorted"""
    return sorted(s.name for s in sp.sympify(e).free_symbols)


def diff(e: sp.Expr, v: Union[str, sp.Symbol]) -> sp.Expr:
    """Partial derivative of e with respect to coordinate v"""
    var = symbol(v) if isinstance(v, str) else v
    return sp.diff(sp.sympify(e), var)


def canonical(e: sp.Expr) -> sp.Expr:
    """Reduced ratio of expanded polynomials; defined on the sqrt-free fragment"""
    e = sp.sympify(e)
    if e.has(Sqrt):
        raise FragmentError(f"canonical form requested for an expression containing sqrt: {e}")
    num, den = sp.fraction(sp.cancel(sp.together(e)))
    num = sp.expand(num)
    den = sp.expand(den)
    if den == 1:
        return num
    return num / den


def _fold_sqrt_powers(e: sp.Expr) -> sp.Expr:
    def is_folding_target(t):
        return t.is_Pow and isinstance(t.base, Sqrt) and t.exp.is_Integer and abs(t.exp) >= 2

    def fold(t):
        inner = t.base.args[0]
        n = int(t.exp)
        return inner ** (n // 2) * Sqrt(inner) ** (n % 2)

    return e.replace(is_folding_target, fold)


def normal_form(e: sp.Expr) -> sp.Expr:
    """Printing normal form on the whole fragment

    sqrt(u)^(2m+r) becomes u^m*sqrt(u)^r, then the result is reduced to a
    single ratio with the remaining sqrt nodes treated as generators.
    Display only: zero testing never depends on it.
    """
    e = _fold_sqrt_powers(sp.sympify(e))
    if not e.has(Sqrt):
        return canonical(e)
    return _fold_sqrt_powers(sp.cancel(sp.together(e)))


def _float_namespace() -> list:
    return [{"Sqrt": math.sqrt}, "math"]


def compile_float(e: sp.Expr, names: Iterable[str]):
    """Float evaluator taking positional values in the order of names"""
    return sp.lambdify([symbol(n) for n in names], sp.sympify(e), modules=_float_namespace())


def eval_expr(e: sp.Expr, point: Mapping[str, float]) -> float:
    """Standard float evaluation at a point given as coordinate -> value"""
    e = sp.sympify(e)
    names = free_coordinates(e)
    missing = [n for n in names if n not in point]
    if missing:
        raise EvaluationError(f"no value assigned to {', '.join(missing)}")
    fn = compile_float(e, names)
    try:
        return float(fn(*[float(point[n]) for n in names]))
    except (ValueError, ZeroDivisionError, OverflowError) as err:
        raise EvaluationError(f"domain error evaluating {e} at {dict(point)}: {err}")


def substitute(e: sp.Expr, values: Dict[str, sp.Expr]) -> sp.Expr:
    return sp.sympify(e).xreplace({symbol(k): sp.sympify(v) for k, v in values.items()})
