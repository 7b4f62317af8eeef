"""
Multivector fields stored on strictly increasing index tuples
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

import sympy as sp

from poissonlift.exceptions import ChartError, ChartMismatchError, DegreeError
from poissonlift.models.chart import Chart
from poissonlift.symexpr.algebra import Sqrt, as_expr, normal_form, substitute
from poissonlift.symexpr.printer import to_text

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]
Components = Dict[Index, sp.Expr]


def sort_with_sign(indices: Sequence[int]) -> Tuple[Index, int]:
    """Sorted tuple and the parity sign of the sorting permutation; sign 0 on repeats"""
    items = list(indices)
    if len(set(items)) != len(items):
        return tuple(sorted(items)), 0
    inversions = sum(1 for a in range(len(items)) for b in range(a + 1, len(items)) if items[a] > items[b])
    return tuple(sorted(items)), (-1 if inversions % 2 else 1)


def accumulate(target: Components, key: Sequence[int], value) -> None:
    """Add value at an arbitrary index ordering, folding the sign in"""
    ordered, sign = sort_with_sign(key)
    if sign == 0 or value == 0:
        return
    target[ordered] = target.get(ordered, sp.Integer(0)) + sign * value


def wedge_components(a: Mapping[Index, sp.Expr], b: Mapping[Index, sp.Expr]) -> Components:
    out: Components = {}
    for left, p in a.items():
        for right, q in b.items():
            if set(left) & set(right):
                continue
            accumulate(out, left + right, p * q)
    return out


def normalize(components: Mapping[Index, sp.Expr]) -> Components:
    """Expanded components with literal zeros dropped"""
    out: Components = {}
    for key, value in components.items():
        value = sp.expand(sp.sympify(value))
        if value != 0:
            out[key] = value
    return out


@dataclass(frozen=True)
class MultiVector:
    """Degree-k antisymmetric field: increasing k-tuples of chart indices to coefficients"""

    chart: Chart
    degree: int
    components: Dict[Index, sp.Expr] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeError(f"negative degree {self.degree}")
        if self.degree > self.chart.dimension:
            raise DegreeError(f"degree {self.degree} exceeds chart dimension {self.chart.dimension}")
        for key in self.components:
            if len(key) != self.degree:
                raise DegreeError(f"component {key} does not have degree {self.degree}")
            if any(i < 0 or i >= self.chart.dimension for i in key):
                raise ChartError(f"component {key} outside chart of dimension {self.chart.dimension}")
            if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                raise ChartError(f"component key {key} is not strictly increasing")

    @classmethod
    def from_components(cls, chart: Chart, degree: int, components: Mapping[Sequence[int], Any]) -> "MultiVector":
        """Build from any index ordering; repeated indices vanish, signs are folded in"""
        raw: Components = {}
        for key, value in components.items():
            accumulate(raw, tuple(key), as_expr(value))
        return cls(chart, degree, normalize(raw))

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "MultiVector":
        return cls(chart, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, value) -> "MultiVector":
        return cls(chart, 0, normalize({(): as_expr(value)}))

    @property
    def is_zero(self) -> bool:
        """True when no component survives sparse normalization"""
        return not self.components

    @property
    def has_sqrt(self) -> bool:
        return any(value.has(Sqrt) for value in self.components.values())

    @property
    def value(self) -> sp.Expr:
        """The scalar of a degree-0 multivector"""
        if self.degree != 0:
            raise DegreeError(f"value() needs degree 0, got {self.degree}")
        return self.components.get((), sp.Integer(0))

    def terms(self) -> Iterator[Tuple[Index, sp.Expr]]:
        """Decomposable terms in lexicographic index order"""
        for key in sorted(self.components):
            yield key, self.components[key]

    def component(self, *indices: int) -> sp.Expr:
        ordered, sign = sort_with_sign(indices)
        if sign == 0:
            return sp.Integer(0)
        return sign * self.components.get(ordered, sp.Integer(0))

    def component_by_name(self, *names: str) -> sp.Expr:
        return self.component(*[self.chart.index(n) for n in names])

    def matrix(self) -> List[List[sp.Expr]]:
        """Full antisymmetric matrix of a bivector"""
        if self.degree != 2:
            raise DegreeError(f"matrix() needs a bivector, got degree {self.degree}")
        n = self.chart.dimension
        return [[self.component(a, b) for b in range(n)] for a in range(n)]

    def _check_compatible(self, other: "MultiVector") -> None:
        if self.chart != other.chart:
            raise ChartMismatchError(f"charts differ: {self.chart} vs {other.chart}")
        if self.degree != other.degree:
            raise DegreeError(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check_compatible(other)
        merged = dict(self.components)
        for key, value in other.components.items():
            merged[key] = merged.get(key, sp.Integer(0)) + value
        return MultiVector(self.chart, self.degree, normalize(merged))

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.chart, self.degree, {k: -v for k, v in self.components.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def scale(self, factor) -> "MultiVector":
        factor = as_expr(factor)
        return MultiVector(self.chart, self.degree, normalize({k: factor * v for k, v in self.components.items()}))

    def __mul__(self, factor) -> "MultiVector":
        return self.scale(factor)

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> "MultiVector":
        return MultiVector(self.chart, self.degree, normalize({k: fn(v) for k, v in self.components.items()}))

    def simplified(self) -> "MultiVector":
        """Components in printing normal form; entries that cancel only there drop out"""
        return self.map_coefficients(normal_form)

    def substitute(self, values: Mapping[str, Any]) -> "MultiVector":
        return self.map_coefficients(lambda v: substitute(v, values))

    def on_chart(self, chart: Chart) -> "MultiVector":
        """Same components read on a chart with the same dimension"""
        if chart.dimension != self.chart.dimension:
            raise ChartMismatchError(f"cannot move a field from {self.chart} to {chart}")
        return MultiVector(chart, self.degree, dict(self.components))

    def label(self, key: Index) -> str:
        return f"({','.join(self.chart.names[i] for i in key)})"

    def render(self) -> str:
        """'(a,b) : expr' lines in lexicographic order; '0' for the zero field"""
        if self.is_zero:
            return "0"
        return "\n".join(f"{self.label(key)} : {to_text(normal_form(value))}" for key, value in self.terms())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chart": list(self.chart.names),
            "degree": self.degree,
            "components": {",".join(self.chart.names[i] for i in k): to_text(v) for k, v in self.terms()},
        }

    def __str__(self) -> str:
        return self.render()


def wedge(p: MultiVector, q: MultiVector) -> MultiVector:
    """Exterior product; degrees add and overlapping slots vanish"""
    if p.chart != q.chart:
        raise ChartMismatchError(f"wedge of fields on different charts: {p.chart} vs {q.chart}")
    if p.degree + q.degree > p.chart.dimension:
        raise DegreeError(f"wedge of degrees {p.degree} and {q.degree} exceeds chart dimension {p.chart.dimension}")
    return MultiVector(p.chart, p.degree + q.degree, normalize(wedge_components(p.components, q.components)))


def vector_field(chart: Chart, components: Mapping[str, Any]) -> MultiVector:
    """Vector field from coordinate name -> coefficient"""
    return MultiVector.from_components(chart, 1, {(chart.index(n),): v for n, v in components.items()})


def bivector(chart: Chart, components: Mapping[Tuple[str, str], Any]) -> MultiVector:
    """Bivector from (name, name) -> coefficient; ordering signs are folded in"""
    return MultiVector.from_components(
        chart, 2, {(chart.index(a), chart.index(b)): v for (a, b), v in components.items()}
    )


def multivector(chart: Chart, degree: int, components: Mapping[Iterable[str], Any]) -> MultiVector:
    return MultiVector.from_components(
        chart, degree, {tuple(chart.index(n) for n in names): v for names, v in components.items()}
    )
