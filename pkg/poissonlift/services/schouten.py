"""
Schouten-Nijenhuis bracket from its axioms

Every operand is split into decomposable terms f*d_I. The bracket of two
terms is reduced with graded antisymmetry and the graded Leibniz rule

    [P, Y^Z] = [P, Y]^Z + (-1)^((k-1)*deg Y) Y^[P, Z]

down to the base cases [f, g] = 0, [X, f] = X(f) and the commutator of two
vector fields.
"""

import logging

import sympy as sp

from poissonlift.exceptions import ChartMismatchError, DegreeError
from poissonlift.models.chart import Chart
from poissonlift.models.multivector import Components, Index, MultiVector, normalize, wedge_components
from poissonlift.symexpr.algebra import as_expr

logger = logging.getLogger(__name__)


def _add_into(target: Components, source: Components, sign: int = 1) -> None:
    for key, value in source.items():
        target[key] = target.get(key, sp.Integer(0)) + sign * value


class SchoutenCalculator:
    """Bracket of decomposable terms on one chart"""

    def __init__(self, chart: Chart):
        self.chart = chart
        self.symbols = chart.symbols

    def _d(self, e: sp.Expr, index: int) -> sp.Expr:
        return sp.diff(e, self.symbols[index])

    def bracket_terms(self, f: sp.Expr, left: Index, g: sp.Expr, right: Index) -> Components:
        """[f*d_left, g*d_right] as raw components"""
        k, l = len(left), len(right)
        if l == 0:
            if k == 0:
                return {}
            sign = -1 if k % 2 else 1
            return {key: sign * value for key, value in self.bracket_terms(g, right, f, left).items()}
        if l == 1:
            j = right[0]
            if k == 0:
                return {(): -g * self._d(f, j)}
            if k == 1:
                i = left[0]
                out: Components = {}
                _add_into(out, {(j,): f * self._d(g, i)})
                _add_into(out, {(i,): -g * self._d(f, j)})
                return out
            return {key: -value for key, value in self.bracket_terms(g, right, f, left).items()}
        head, tail = right[:1], right[1:]
        out = {}
        _add_into(out, wedge_components(self.bracket_terms(f, left, g, head), {tail: sp.Integer(1)}))
        sign = 1 if (k - 1) % 2 == 0 else -1
        _add_into(out, wedge_components({head: g}, self.bracket_terms(f, left, sp.Integer(1), tail)), sign)
        return out

    def bracket(self, p: MultiVector, q: MultiVector) -> MultiVector:
        degree = p.degree + q.degree - 1
        if degree > self.chart.dimension:
            raise DegreeError(f"bracket of degrees {p.degree} and {q.degree} exceeds dimension {self.chart.dimension}")
        out: Components = {}
        for left, f in p.components.items():
            for right, g in q.components.items():
                _add_into(out, self.bracket_terms(f, left, g, right))
        if degree < 0:
            return MultiVector.zero(self.chart, 0)
        return MultiVector(self.chart, degree, normalize(out))


def _as_multivector(value, chart: Chart) -> MultiVector:
    if isinstance(value, MultiVector):
        return value
    return MultiVector.scalar(chart, as_expr(value))


def schouten(p: MultiVector, q: MultiVector) -> MultiVector:
    """[P, Q] of degree deg P + deg Q - 1; degree -1 gives the zero scalar"""
    if isinstance(p, MultiVector) and not isinstance(q, MultiVector):
        q = _as_multivector(q, p.chart)
    elif isinstance(q, MultiVector) and not isinstance(p, MultiVector):
        p = _as_multivector(p, q.chart)
    if p.chart != q.chart:
        raise ChartMismatchError(f"Schouten bracket of fields on different charts: {p.chart} vs {q.chart}")
    return SchoutenCalculator(p.chart).bracket(p, q)


def lie_derivative(x: MultiVector, p) -> MultiVector:
    """L_X P = [X, P]"""
    if x.degree != 1:
        raise DegreeError(f"Lie derivative along a field of degree {x.degree}")
    return schouten(x, p)


def commutator(x: MultiVector, y: MultiVector) -> MultiVector:
    """[X, Y]^j = X(Y^j) - Y(X^j)"""
    if x.degree != 1 or y.degree != 1:
        raise DegreeError(f"commutator needs vector fields, got degrees {x.degree} and {y.degree}")
    return schouten(x, y)


def apply_vector_field(x: MultiVector, f) -> sp.Expr:
    """X(f)"""
    if x.degree != 1:
        raise DegreeError(f"X(f) needs a vector field, got degree {x.degree}")
    f = as_expr(f)
    symbols = x.chart.symbols
    return sp.expand(sum((value * sp.diff(f, symbols[key[0]]) for key, value in x.components.items()), sp.Integer(0)))


def bivector_bracket(pi: MultiVector, f, g) -> sp.Expr:
    """{f, g} = sum over i<j of pi^ij (d_i f d_j g - d_j f d_i g)"""
    if pi.degree != 2:
        raise DegreeError(f"bivector bracket needs degree 2, got {pi.degree}")
    f, g = as_expr(f), as_expr(g)
    symbols = pi.chart.symbols
    total = sp.Integer(0)
    for (i, j), value in pi.components.items():
        xi, xj = symbols[i], symbols[j]
        total += value * (sp.diff(f, xi) * sp.diff(g, xj) - sp.diff(f, xj) * sp.diff(g, xi))
    return sp.expand(total)
