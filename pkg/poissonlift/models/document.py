"""
Problem document schema

A document declares a chart, named expressions, vector fields, bivectors,
lifts, deformation specs, linear maps and expectation blocks. Expressions
are strings in the expression grammar.
"""

from typing import Annotated, Dict, List, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator

from poissonlift.models.verdict import VerdictKind


def _expression_text(value):
    if isinstance(value, bool):
        raise ValueError("expected an expression, got a boolean")
    if isinstance(value, (int, float)):
        return str(value)
    return value


ExprText = Annotated[str, BeforeValidator(_expression_text)]


class TermModel(BaseModel):
    """One lifted pair of a deformation"""

    kind: str = Field(..., pattern="^(CV|VV|CC)$")
    x: str
    y: Optional[str] = None


class DeformationModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    theorem: str = Field(..., pattern="^(cv|vv|mixed)$")
    base: str
    lam: ExprText = Field("1", alias="lambda")
    casimir: ExprText = "1"
    terms: List[TermModel]


class LiftModel(BaseModel):
    source: str
    kind: str = Field("tangent", pattern="^(tangent|complete|vertical)$")


class AlgebraExpectation(BaseModel):
    name: str
    map: Optional[str] = None
    matches: bool = True


class Expectation(BaseModel):
    """Expected properties of one named tensor"""

    target: str
    jacobi: Optional[VerdictKind] = None
    matrix: Optional[Dict[str, ExprText]] = None
    casimirs: List[ExprText] = Field(default_factory=list)
    non_casimirs: List[ExprText] = Field(default_factory=list)
    algebra: Optional[AlgebraExpectation] = None


class ProblemDocument(BaseModel):
    name: str
    description: str = ""
    chart: List[str]
    expressions: Dict[str, ExprText] = Field(default_factory=dict)
    fields: Dict[str, Dict[str, ExprText]] = Field(default_factory=dict)
    tensors: Dict[str, Dict[str, ExprText]] = Field(default_factory=dict)
    lifts: Dict[str, LiftModel] = Field(default_factory=dict)
    deformations: Dict[str, DeformationModel] = Field(default_factory=dict)
    maps: Dict[str, Dict[str, ExprText]] = Field(default_factory=dict)
    expect: List[Expectation] = Field(default_factory=list)

    @field_validator("chart")
    @classmethod
    def chart_not_empty(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("chart must declare at least one coordinate")
        return value


class AlgebraTable(BaseModel):
    """Commutation table: rows [i, j, k, coefficient] meaning [e_i, e_j] += coefficient*e_k"""

    dimension: int
    brackets: List[List[ExprText]] = Field(default_factory=list)
    description: str = ""
