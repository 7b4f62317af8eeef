"""
Printer emitting the parser's grammar

Output re-parses to the same expression. Unary minus binds tighter than
'^' in the grammar, so a negated leading power is printed as -(x1^2).
"""

import logging

import sympy as sp
from sympy.core.sorting import default_sort_key
from sympy.printing.str import StrPrinter

from poissonlift.symexpr.algebra import Sqrt

logger = logging.getLogger(__name__)


class ExprPrinter(StrPrinter):
    """Deterministic lex-ordered printing in the ASCII expression grammar"""

    def _print_Symbol(self, expr):
        return expr.name

    def _print_Integer(self, expr):
        return str(expr.p)

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"

    def _print_Sqrt(self, expr):
        return f"sqrt({self._print(expr.args[0])})"

    def _print_Add(self, expr, order=None):
        terms = expr.as_ordered_terms(order="lex")
        parts = []
        for position, term in enumerate(terms):
            coeff, _ = term.as_coeff_Mul()
            negative = coeff.is_negative
            if position == 0:
                parts.append(self._negated(-term) if negative else self._print(term))
            elif negative:
                parts.append(f" - {self._print(-term)}")
            else:
                parts.append(f" + {self._print(term)}")
        return "".join(parts)

    def _negated(self, positive) -> str:
        text = self._print(positive)
        if isinstance(positive, sp.Add) or "^" in _leading_factor(text):
            return f"-({text})"
        return f"-{text}"

    def _print_Mul(self, expr):
        coeff, rest = expr.as_coeff_Mul()
        if coeff.is_negative:
            return self._negated(-expr)
        numerator = []
        denominator = []
        if coeff.p != 1:
            numerator.append(str(coeff.p))
        if coeff.q != 1:
            denominator.append(str(coeff.q))
        for factor in sorted(sp.Mul.make_args(rest), key=default_sort_key):
            if factor == 1:
                continue
            if factor.is_Pow and factor.exp.is_Integer and factor.exp < 0:
                denominator.append(self._power(factor.base, -int(factor.exp)))
            else:
                numerator.append(self._factor(factor))
        text = "*".join(numerator) if numerator else "1"
        if not denominator:
            return text
        if len(denominator) == 1:
            return f"{text}/{denominator[0]}"
        return f"{text}/({'*'.join(denominator)})"

    def _print_Pow(self, expr, rational=False):
        if expr.exp.is_Integer and expr.exp < 0:
            return f"1/{self._power(expr.base, -int(expr.exp))}"
        if expr.exp.is_Integer:
            return self._power(expr.base, int(expr.exp))
        return super()._print_Pow(expr, rational)

    def _power(self, base, n: int) -> str:
        text = self._factor(base)
        if n == 1:
            return text
        return f"{text}^{n}"

    def _factor(self, expr) -> str:
        """Print as an atom, parenthesizing anything that is not one"""
        if isinstance(expr, (sp.Symbol, Sqrt)):
            return self._print(expr)
        if expr.is_Integer and expr >= 0:
            return self._print(expr)
        if expr.is_Pow:
            return self._print(expr) if expr.exp.is_Integer and expr.exp > 0 else f"({self._print(expr)})"
        return f"({self._print(expr)})"


def _leading_factor(text: str) -> str:
    """First factor of a printed product, up to the first top-level '*' or '/'"""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "*/" and depth == 0:
            return text[:i]
    return text


_printer = ExprPrinter()


def to_text(e) -> str:
    """Print an expression in the grammar the parser reads"""
    return _printer.doprint(sp.sympify(e))
