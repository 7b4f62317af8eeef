"""
Linear coordinate changes and Lie-algebra structure constants

A LinearMap lists NEW coordinates as linear forms in the OLD ones, the way
the maps (x1, ..., y3) -> (2*x1, y1 + x2, ...) are written down.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from poissonlift.exceptions import (
    ChartMismatchError,
    LinearMapError,
    NonlinearTensorError,
    SingularMapError,
    StructureConstantsError,
)
from poissonlift.models.chart import Chart, make_chart
from poissonlift.models.multivector import MultiVector, normalize
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.services.poisson import check_jacobi
from poissonlift.symexpr.algebra import as_expr, canonical, has_sqrt, normal_form
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class LinearMap:
    """Invertible rational matrix; row a gives new coordinate a in terms of the old ones"""

    source: Chart
    target: Chart
    matrix: sp.ImmutableMatrix

    def __post_init__(self):
        n = self.source.dimension
        if self.matrix.shape != (n, n) or self.target.dimension != n:
            raise LinearMapError(f"map matrix must be {n}x{n} with {n} target names")
        if any(not entry.is_Rational for entry in self.matrix):
            raise LinearMapError("map entries must be rational numbers")
        if self.matrix.det() == 0:
            raise SingularMapError(f"linear map {list(self.target.names)} is not invertible")

    @classmethod
    def identity(cls, chart: Chart) -> "LinearMap":
        return cls(chart, make_chart(chart.names), sp.ImmutableMatrix(sp.eye(chart.dimension)))

    @classmethod
    def from_expressions(cls, chart: Chart, expressions: Mapping[str, Any]) -> "LinearMap":
        """Build from target name -> linear form in the chart coordinates"""
        if len(expressions) != chart.dimension:
            raise LinearMapError(f"map defines {len(expressions)} coordinates, chart has {chart.dimension}")
        rows = []
        for name, text in expressions.items():
            expr = as_expr(text)
            unknown = sorted(s.name for s in expr.free_symbols if s.name not in chart.names)
            if unknown:
                raise LinearMapError(f"{name} uses coordinates outside {chart}: {', '.join(unknown)}")
            if has_sqrt(expr):
                raise LinearMapError(f"{name} = {to_text(expr)} is not linear")
            try:
                poly = sp.Poly(canonical(expr), *chart.symbols)
            except sp.PolynomialError:
                raise LinearMapError(f"{name} = {to_text(expr)} is not linear")
            if any(sum(monomial) != 1 for monomial in poly.monoms()):
                raise LinearMapError(f"{name} = {to_text(expr)} is not a homogeneous linear form")
            rows.append([poly.coeff_monomial(s) for s in chart.symbols])
        return cls(chart, make_chart(list(expressions)), sp.ImmutableMatrix(rows))

    def inverse(self) -> "LinearMap":
        return LinearMap(self.target, self.source, sp.ImmutableMatrix(self.matrix.inv()))

    def to_dict(self) -> Dict[str, str]:
        return {
            name: to_text(sum((self.matrix[a, i] * s for i, s in enumerate(self.source.symbols)), sp.Integer(0)))
            for a, name in enumerate(self.target.names)
        }


def pushforward(p: MultiVector, linear_map: LinearMap) -> MultiVector:
    """Components in the new coordinates: one matrix factor per index, x = A^-1 u substituted"""
    if p.chart.names != linear_map.source.names:
        raise ChartMismatchError(f"field on {p.chart}, map from {linear_map.source}")
    a = linear_map.matrix
    inverse = a.inv()
    n = p.chart.dimension
    new_symbols = linear_map.target.symbols
    substitution = {
        old: sum((inverse[j, c] * new_symbols[c] for c in range(n)), sp.Integer(0))
        for j, old in enumerate(p.chart.symbols)
    }
    out: Dict[Tuple[int, ...], sp.Expr] = {}
    for old_key, value in p.components.items():
        value = value.xreplace(substitution)
        for new_key in combinations(range(n), p.degree):
            minor = a.extract(list(new_key), list(old_key)).det() if p.degree else sp.Integer(1)
            if minor != 0:
                out[new_key] = out.get(new_key, sp.Integer(0)) + minor * value
    return MultiVector(linear_map.target, p.degree, normalize(out))


@dataclass(frozen=True)
class StructureConstants:
    """c^k_ij stored for i < j (0-based) with nonzero entries only"""

    dimension: int
    constants: Dict[Triple, sp.Rational] = field(default_factory=dict)
    verify_jacobi: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for (i, j, k), value in self.constants.items():
            if not (0 <= i < j < self.dimension and 0 <= k < self.dimension):
                raise StructureConstantsError(f"index ({i}, {j}, {k}) outside dimension {self.dimension}")
            if value == 0:
                raise StructureConstantsError(f"explicit zero stored at ({i}, {j}, {k})")
        if self.verify_jacobi:
            self._check_jacobi()

    def c(self, i: int, j: int, k: int) -> sp.Rational:
        if i == j:
            return sp.Integer(0)
        if i < j:
            return self.constants.get((i, j, k), sp.Integer(0))
        return -self.constants.get((j, i, k), sp.Integer(0))

    def _check_jacobi(self) -> None:
        n = self.dimension
        if not self.constants:
            return
        for i, j, k in combinations(range(n), 3):
            for l in range(n):
                total = sum(
                    self.c(i, j, m) * self.c(m, k, l)
                    + self.c(j, k, m) * self.c(m, i, l)
                    + self.c(k, i, m) * self.c(m, j, l)
                    for m in range(n)
                )
                if total != 0:
                    raise StructureConstantsError(
                        f"Jacobi identity fails for (e{i + 1}, e{j + 1}, e{k + 1}) in component e{l + 1}"
                    )

    @classmethod
    def from_table(cls, dimension: int, table: Iterable[Sequence], verify_jacobi: bool = True) -> "StructureConstants":
        """Rows [i, j, k, coefficient] with 1-based indices, antisymmetric completion

        Published tables are compared as printed, so comparison callers pass
        verify_jacobi=False.
        """
        constants: Dict[Triple, sp.Rational] = {}
        for row in table:
            if len(row) != 4:
                raise StructureConstantsError(f"table row {row} must be [i, j, k, coefficient]")
            i, j, k = (int(v) - 1 for v in row[:3])
            coefficient = sp.Rational(str(row[3]))
            if i == j:
                raise StructureConstantsError(f"[e{i + 1}, e{i + 1}] must vanish")
            if not all(0 <= v < dimension for v in (i, j, k)):
                raise StructureConstantsError(f"table row {row} outside dimension {dimension}")
            if i > j:
                i, j, coefficient = j, i, -coefficient
            constants[(i, j, k)] = constants.get((i, j, k), sp.Integer(0)) + coefficient
        return cls(dimension, {key: value for key, value in constants.items() if value != 0}, verify_jacobi)

    def transform(self, linear_map: LinearMap) -> "StructureConstants":
        """Basis change c'^r_pq = sum A_pi A_qj c^k_ij (A^-1)_kr"""
        a = linear_map.matrix
        inverse = a.inv()
        n = self.dimension
        out: Dict[Triple, sp.Rational] = {}
        for p, q in combinations(range(n), 2):
            for r in range(n):
                total = sp.Integer(0)
                for (i, j, k), value in self.constants.items():
                    weight = a[p, i] * a[q, j] - a[p, j] * a[q, i]
                    total += weight * value * inverse[k, r]
                if total != 0:
                    out[(p, q, r)] = sp.Rational(total)
        return StructureConstants(n, out)

    def bracket_text(self, i: int, j: int) -> str:
        terms = [
            f"{'' if coeff == 1 else '-' if coeff == -1 else to_text(coeff) + '*'}e{k + 1}"
            for k in range(self.dimension)
            for coeff in (self.c(i, j, k),)
            if coeff != 0
        ]
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_text(self) -> str:
        """Sorted '[e_i, e_j] = ...' lines omitting zero brackets"""
        lines = [
            f"[e{i + 1}, e{j + 1}] = {self.bracket_text(i, j)}"
            for i, j in combinations(range(self.dimension), 2)
            if any(self.c(i, j, k) != 0 for k in range(self.dimension))
        ]
        return "\n".join(lines) if lines else "abelian"

    def to_table(self) -> List[List[Any]]:
        return [[i + 1, j + 1, k + 1, str(v)] for (i, j, k), v in sorted(self.constants.items())]


def structure_constants(pi: PoissonTensor) -> StructureConstants:
    """Read c^k_ij off pi^ij = sum_k c^k_ij x^k"""
    chart = pi.chart
    symbols = chart.symbols
    constants: Dict[Triple, sp.Rational] = {}
    for (i, j), value in pi.bivector.components.items():
        value = normal_form(value)
        if value == 0:
            continue
        where = f"component ({chart.names[i]},{chart.names[j]}) = {to_text(value)}"
        if has_sqrt(value):
            raise NonlinearTensorError(f"{where} is not linear")
        try:
            poly = sp.Poly(canonical(value), *symbols)
        except sp.PolynomialError:
            raise NonlinearTensorError(f"{where} is not a polynomial")
        for monomial, coeff in poly.terms():
            if sum(monomial) != 1:
                raise NonlinearTensorError(f"{where} is not homogeneous linear")
            if not coeff.is_Rational:
                raise NonlinearTensorError(f"{where} has a non-rational coefficient")
            constants[(i, j, monomial.index(1))] = sp.Rational(coeff)
    return StructureConstants(chart.dimension, constants)


def _table_constants(c: StructureConstants, table: Iterable[Sequence]) -> StructureConstants:
    return StructureConstants.from_table(c.dimension, table, verify_jacobi=False)


def match_table(c: StructureConstants, table: Iterable[Sequence]) -> bool:
    """True iff c has exactly the table's nonzero brackets"""
    return c.constants == _table_constants(c, table).constants


def table_mismatches(c: StructureConstants, table: Iterable[Sequence]) -> List[str]:
    """Brackets where the computed constants and the table differ"""
    expected = _table_constants(c, table)
    mismatches = []
    for i, j in combinations(range(c.dimension), 2):
        computed, stated = c.bracket_text(i, j), expected.bracket_text(i, j)
        if computed != stated:
            mismatches.append(f"[e{i + 1}, e{j + 1}]: table {stated}, computed {computed}")
    return mismatches


def pushforward_poisson(pi: PoissonTensor, linear_map: LinearMap, tester: Optional[ZeroTester] = None) -> PoissonTensor:
    """Pushforward of a Poisson tensor with its Jacobi identity re-verified"""
    return check_jacobi(pushforward(pi.bivector, linear_map), tester)
