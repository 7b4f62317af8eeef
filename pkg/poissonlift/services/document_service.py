"""
Document service for loading problem documents and resolving their names
"""

import sys
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import sympy as sp
import yaml
from pydantic import ValidationError

from poissonlift.config import Settings, data_dir, load_yaml_file
from poissonlift.exceptions import DocumentError, PoissonLiftError
from poissonlift.models.chart import Chart, make_chart, tangent_chart
from poissonlift.models.document import AlgebraTable, ProblemDocument
from poissonlift.models.multivector import MultiVector, multivector, vector_field
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.services.changevar import LinearMap
from poissonlift.services.deform import Deformation, DeformationSpec, DeformationTerm, LiftPair, Theorem, deform
from poissonlift.services.lift import complete_lift, tangent_lift_poisson, vertical_lift
from poissonlift.services.poisson import check_jacobi
from poissonlift.symexpr.algebra import normal_form
from poissonlift.symexpr.parser import parse
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester, default_tester

logger = logging.getLogger(__name__)


class DocumentService:
    """Service for reading problem documents and the Lie-algebra table file"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self._algebras: Optional[Dict[str, AlgebraTable]] = None

    def load(self, path: Union[str, Path]) -> ProblemDocument:
        """Load a problem document from a YAML file, or from stdin when path is '-'"""
        try:
            if str(path) == "-":
                raw = yaml.safe_load(sys.stdin.read())
            else:
                if not Path(path).exists():
                    raise DocumentError(f"Problem document not found: {path}")
                with open(path, "r") as f:
                    raw = yaml.safe_load(f)
        except yaml.YAMLError as e:
            logger.error(f"Failed to parse problem document {path}: {e}")
            raise DocumentError(f"invalid YAML in {path}: {e}")
        if not isinstance(raw, dict):
            raise DocumentError(f"problem document {path} must be a mapping")
        try:
            document = ProblemDocument(**raw)
        except ValidationError as e:
            logger.error(f"Invalid problem document {path}: {e}")
            raise DocumentError(f"invalid problem document {path}: {e}")
        logger.info(f"Loaded problem document {document.name} from {path}")
        return document

    def example_path(self, number: int) -> Path:
        return self.settings.examples_path() / f"example_{number}.yml"

    def load_example(self, number: int) -> ProblemDocument:
        path = self.example_path(number)
        if not path.exists():
            raise DocumentError(f"no bundled example {number} (looked for {path})")
        return self.load(path)

    def algebras(self) -> Dict[str, AlgebraTable]:
        """Named commutation tables from data/lie_algebras.yml"""
        if self._algebras is None:
            raw = load_yaml_file(data_dir() / "lie_algebras.yml") or {}
            try:
                self._algebras = {name: AlgebraTable(**table) for name, table in raw.get("algebras", {}).items()}
            except ValidationError as e:
                raise DocumentError(f"invalid Lie algebra table file: {e}")
            logger.debug(f"Loaded {len(self._algebras)} Lie algebra tables")
        return self._algebras

    def algebra(self, name: str) -> AlgebraTable:
        tables = self.algebras()
        if name not in tables:
            raise DocumentError(f"unknown Lie algebra {name!r}")
        return tables[name]


class ProblemContext:
    """Resolves the names of one document into charts, fields and tensors

    Results are cached so that each tensor is verified once per run.
    """

    def __init__(self, document: ProblemDocument, tester: Optional[ZeroTester] = None, debug_force: bool = False):
        self.document = document
        self.tester = tester or default_tester()
        self.debug_force = debug_force
        try:
            self.chart = make_chart(document.chart)
            self.tangent = tangent_chart(self.chart)
        except PoissonLiftError as e:
            raise DocumentError(f"chart of {document.name}: {e}")
        self._expressions: Dict[str, sp.Expr] = {}
        self._tensors: Dict[str, PoissonTensor] = {}
        self._deformations: Dict[str, Deformation] = {}
        self._known_names = set(self.tangent.names) | set(document.expressions)

    def _chart_for(self, names) -> Chart:
        return self.chart if all(n in self.chart.names for n in names) else self.tangent

    def expression(self, text: str) -> sp.Expr:
        """A named expression, or text parsed over the tangent chart with names substituted"""
        if text in self.document.expressions:
            if text not in self._expressions:
                self._expressions[text] = self._parse(self.document.expressions[text], f"expression {text}")
            return self._expressions[text]
        return self._parse(text, "expression")

    def _parse(self, text: str, where: str) -> sp.Expr:
        try:
            expr = parse(text, self._known_names)
        except PoissonLiftError as e:
            raise DocumentError(f"{where}: {text!r}: {e}")
        named = {s: s for s in expr.free_symbols if s.name in self.document.expressions}
        if named:
            expr = expr.xreplace({s: self.expression(s.name) for s in named})
        return expr

    def field(self, name: str) -> MultiVector:
        if name not in self.document.fields:
            raise DocumentError(f"unknown vector field {name!r}")
        comps = self.document.fields[name]
        chart = self._chart_for(comps)
        try:
            return vector_field(chart, {k: self._parse(v, f"field {name}") for k, v in comps.items()})
        except DocumentError:
            raise
        except PoissonLiftError as e:
            raise DocumentError(f"field {name}: {e}")

    def bivector(self, name: str) -> MultiVector:
        if name not in self.document.tensors:
            raise DocumentError(f"unknown tensor {name!r}")
        entries = {}
        for key, text in self.document.tensors[name].items():
            names = tuple(part.strip() for part in key.split(","))
            if len(names) != 2:
                raise DocumentError(f"tensor {name}: entry key {key!r} must name two coordinates")
            entries[names] = self._parse(text, f"tensor {name}")
        coordinates = {n for pair in entries for n in pair}
        try:
            return multivector(self._chart_for(coordinates), 2, entries)
        except PoissonLiftError as e:
            raise DocumentError(f"tensor {name}: {e}")

    def bivector_entries(self, chart: Chart, entries: Dict[str, str]) -> Dict[str, str]:
        """Expected matrix entries on a chart, upper triangle keyed 'a,b' in canonical printing"""
        parsed = {}
        for key, text in entries.items():
            names = tuple(part.strip() for part in key.split(","))
            if len(names) != 2:
                raise DocumentError(f"matrix entry key {key!r} must name two coordinates")
            parsed[names] = self._parse(text, f"matrix entry {key}")
        try:
            p = multivector(chart, 2, parsed)
        except PoissonLiftError as e:
            raise DocumentError(f"expected matrix: {e}")
        names = chart.names
        n = chart.dimension
        return {
            f"{names[a]},{names[b]}": to_text(normal_form(p.component(a, b)))
            for a in range(n)
            for b in range(a + 1, n)
        }

    def tensor(self, name: str) -> PoissonTensor:
        """Any named bivector, lift or deformation as a Jacobi-tagged tensor"""
        if name in self._tensors:
            return self._tensors[name]
        if name in self.document.deformations:
            result = self.deformation(name).tensor
        elif name in self.document.lifts:
            lift = self.document.lifts[name]
            if lift.kind == "tangent":
                result = tangent_lift_poisson(self.tensor(lift.source), self.tester)
            else:
                result = check_jacobi(self.lifted(name), self.tester)
        elif name in self.document.tensors:
            result = check_jacobi(self.bivector(name), self.tester)
        else:
            raise DocumentError(f"unknown tensor {name!r}")
        self._tensors[name] = result
        return result

    def lifted(self, name: str) -> MultiVector:
        lift = self.document.lifts[name]
        source = self.multivector(lift.source)
        if lift.kind == "vertical":
            return vertical_lift(source)
        if lift.kind == "complete":
            return complete_lift(source)
        return tangent_lift_poisson(self.tensor(lift.source), self.tester).bivector

    def multivector(self, name: str) -> MultiVector:
        """Resolve a field, tensor, lift or deformation name; other text is read as a scalar"""
        if name in self.document.fields:
            return self.field(name)
        if name in self.document.lifts:
            return self.lifted(name)
        if name in self.document.tensors or name in self.document.deformations:
            return self.tensor(name).bivector
        expr = self.expression(name)
        return MultiVector.scalar(self._chart_for([s.name for s in expr.free_symbols]), expr)

    def deformation_spec(self, name: str) -> DeformationSpec:
        model = self.document.deformations[name]
        terms: List[DeformationTerm] = []
        for term in model.terms:
            y_name = term.y or term.x
            terms.append(DeformationTerm(LiftPair(term.kind), self.field(term.x), self.field(y_name), term.x, y_name))
        return DeformationSpec(
            base=self.tensor(model.base),
            terms=tuple(terms),
            lam=self.expression(model.lam),
            casimir=self.expression(model.casimir),
        )

    def deformation(self, name: str) -> Deformation:
        if name not in self.document.deformations:
            raise DocumentError(f"unknown deformation {name!r}")
        if name not in self._deformations:
            model = self.document.deformations[name]
            self._deformations[name] = deform(
                self.deformation_spec(name), Theorem(model.theorem), self.tester, self.debug_force
            )
        return self._deformations[name]

    def linear_map(self, name: str) -> LinearMap:
        if name not in self.document.maps:
            raise DocumentError(f"unknown map {name!r}")
        exprs = {target: self._parse(text, f"map {name}") for target, text in self.document.maps[name].items()}
        used = {s.name for e in exprs.values() for s in e.free_symbols}
        chart = self.chart if used <= set(self.chart.names) and len(exprs) == self.chart.dimension else self.tangent
        try:
            return LinearMap.from_expressions(chart, exprs)
        except PoissonLiftError as e:
            raise DocumentError(f"map {name}: {e}")
