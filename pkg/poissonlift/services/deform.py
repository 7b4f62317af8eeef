"""
Deformations of the tangent lift pi_TM

Every constructor verifies the hypotheses of the theorem it realizes, builds
pi_TM + lam*c*sum(F_a ^ G_a) from lifted vector-field pairs and re-verifies
the Jacobi identity of the result.

Commutator hypotheses are read on the flat term list: every two fields of
which at least one is complete-lifted must commute. Inside one term this is
strict. Across two terms a failing commutator is replaced by the term of
[D, D] it feeds, [F_a, F_b] ^ partner(F_a) ^ partner(F_b) = 0, and the
commutator verdict is kept in the hypothesis note.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from poissonlift.exceptions import ChartMismatchError, DegreeError, JacobiFailureError, PreconditionError
from poissonlift.models.chart import Chart, tangent_chart
from poissonlift.models.multivector import MultiVector, wedge
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.models.verdict import Verdict
from poissonlift.services.lift import (
    LiftedFunction,
    complete_lift,
    fiber_linear,
    pullback,
    tangent_lift_poisson,
    vertical_lift,
)
from poissonlift.services.poisson import (
    bracket_verdict,
    check_jacobi,
    is_casimir,
    is_poisson_vf,
    multivector_verdict,
)
from poissonlift.services.schouten import apply_vector_field, commutator, schouten
from poissonlift.symexpr.algebra import as_expr, has_sqrt
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester, default_tester

logger = logging.getLogger(__name__)


class LiftPair(str, Enum):
    """How the two fields of a term are lifted: complete (C) or vertical (V)"""

    CV = "CV"
    VV = "VV"
    CC = "CC"

    @property
    def complete_slots(self) -> Tuple[bool, bool]:
        return {"CV": (True, False), "VV": (False, False), "CC": (True, True)}[self.value]


class Theorem(str, Enum):
    CV = "cv"
    VV = "vv"
    MIXED = "mixed"


@dataclass(frozen=True)
class DeformationTerm:
    """One pair (X, Y) wedged after lifting"""

    kind: LiftPair
    x: MultiVector
    y: MultiVector
    x_label: str = "X"
    y_label: str = "Y"

    def lifted(self) -> Tuple[MultiVector, MultiVector]:
        first, second = self.kind.complete_slots
        return (
            complete_lift(self.x) if first else vertical_lift(self.x),
            complete_lift(self.y) if second else vertical_lift(self.y),
        )

    def tensor(self) -> MultiVector:
        return wedge(*self.lifted())

    def label(self) -> str:
        first, second = self.kind.complete_slots
        return f"{self.x_label}_{'C' if first else 'V'}^{self.y_label}_{'C' if second else 'V'}"


@dataclass(frozen=True)
class DeformationSpec:
    """Base tensor, scalar factor lam*c and the flat list of lifted pairs"""

    base: PoissonTensor
    terms: Tuple[DeformationTerm, ...]
    lam: sp.Expr = sp.Integer(1)
    casimir: sp.Expr = sp.Integer(1)

    def __post_init__(self):
        if self.base.chart.is_tangent:
            raise ChartMismatchError("the base tensor of a deformation must live on a base chart")
        for term in self.terms:
            for f in (term.x, term.y):
                if f.degree != 1:
                    raise DegreeError(f"deformation fields are vector fields, got degree {f.degree}")
                if f.chart != self.base.chart:
                    raise ChartMismatchError(f"field on {f.chart}, base tensor on {self.base.chart}")

    @property
    def factor(self) -> sp.Expr:
        return as_expr(self.lam) * as_expr(self.casimir)

    def fields(self) -> List[Tuple[str, MultiVector]]:
        """Distinct labelled fields in term order"""
        seen: Dict[str, MultiVector] = {}
        for t, term in enumerate(self.terms):
            for label, f in ((term.x_label, term.x), (term.y_label, term.y)):
                if label in seen and seen[label] != f:
                    label = f"{label}{t + 1}"
                seen.setdefault(label, f)
        return list(seen.items())


@dataclass(frozen=True)
class Hypothesis:
    """A theorem hypothesis with the verdict that settled it"""

    statement: str
    verdict: Verdict
    note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.verdict.holds

    def to_dict(self) -> Dict[str, Any]:
        data = {"statement": self.statement, "verdict": self.verdict.to_dict()}
        if self.note:
            data["note"] = self.note
        return data

    def __str__(self) -> str:
        text = f"{self.statement}: {self.verdict}"
        return f"{text} ({self.note})" if self.note else text


@dataclass(frozen=True)
class Deformation:
    """Deformed tensor together with the hypotheses that were checked"""

    spec: DeformationSpec
    tensor: PoissonTensor
    lifted_base: PoissonTensor
    hypotheses: Tuple[Hypothesis, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class _Slot:
    term: int
    position: int
    label: str
    base_field: MultiVector
    complete: bool
    lifted: MultiVector


def _slots(terms: Sequence[DeformationTerm]) -> List[_Slot]:
    slots = []
    for t, term in enumerate(terms):
        first, second = term.kind.complete_slots
        lifted = term.lifted()
        slots.append(_Slot(t, 0, term.x_label, term.x, first, lifted[0]))
        slots.append(_Slot(t, 1, term.y_label, term.y, second, lifted[1]))
    return slots


def _partner(slots: List[_Slot], slot: _Slot) -> _Slot:
    return next(s for s in slots if s.term == slot.term and s.position != slot.position)


def _obstruction_verdict(
    bracket: MultiVector, first: MultiVector, second: MultiVector, tester: ZeroTester, algebraic: bool
) -> Verdict:
    """Verdict of bracket ^ first ^ second == 0; trivectors vanish below dimension 3"""
    if bracket.chart.dimension < 3:
        return Verdict.proved_zero()
    return multivector_verdict(wedge(wedge(bracket, first), second), tester, algebraic=algebraic)


def commutator_hypotheses(terms: Sequence[DeformationTerm], tester: Optional[ZeroTester] = None) -> List[Hypothesis]:
    """[F_a, F_b] = 0 for every two fields with at least one complete lift

    Only pairs from different terms may fall back to their wedge term.
    """
    tester = tester or default_tester()
    slots = _slots(terms)
    hypotheses: List[Hypothesis] = []
    for a in range(len(slots)):
        for b in range(a + 1, len(slots)):
            sa, sb = slots[a], slots[b]
            if not (sa.complete or sb.complete):
                continue
            statement = f"[{sa.label}, {sb.label}] = 0"
            algebraic = sa.base_field.has_sqrt or sb.base_field.has_sqrt
            verdict = multivector_verdict(commutator(sa.base_field, sb.base_field), tester, algebraic=algebraic)
            if verdict.holds or sa.term == sb.term:
                hypotheses.append(Hypothesis(statement, verdict))
                continue
            pa, pb = _partner(slots, sa), _partner(slots, sb)
            residual = _obstruction_verdict(schouten(sa.lifted, sb.lifted), pa.lifted, pb.lifted, tester, algebraic)
            if residual.holds:
                guarded = f"[{sa.label}, {sb.label}]^{pa.label}^{pb.label} = 0"
                note = f"{statement} fails: {verdict}"
                logger.warning(f"Accepting {guarded} in place of {statement}: {verdict}")
                hypotheses.append(Hypothesis(guarded, residual, note))
            else:
                hypotheses.append(Hypothesis(statement, verdict))
    return hypotheses


def check_hypotheses(
    spec: DeformationSpec, tester: Optional[ZeroTester] = None, require_poisson_fields: bool = True
) -> List[Hypothesis]:
    """Casimir, Poisson-field and commutator hypotheses of a deformation"""
    tester = tester or default_tester()
    hypotheses = [
        Hypothesis(
            f"c = {to_text(spec.casimir)} is a Casimir of the base tensor",
            is_casimir(spec.base, spec.casimir, tester),
        )
    ]
    if require_poisson_fields:
        for label, f in spec.fields():
            hypotheses.append(Hypothesis(f"{label} is a Poisson vector field", is_poisson_vf(spec.base, f, tester)))
    hypotheses.extend(commutator_hypotheses(spec.terms, tester))
    return hypotheses


def _validate_theorem(spec: DeformationSpec, theorem: Theorem) -> None:
    kinds = {term.kind for term in spec.terms}
    if not spec.terms:
        raise PreconditionError(f"theorem {theorem.value} needs at least one term")
    if theorem == Theorem.CV:
        term = spec.terms[0]
        if len(spec.terms) != 1 or term.kind != LiftPair.CV or term.x != term.y:
            raise PreconditionError("theorem cv takes a single CV term built from one field X")
    elif theorem == Theorem.VV and kinds != {LiftPair.VV}:
        raise PreconditionError("theorem vv takes VV terms only")
    elif theorem == Theorem.MIXED and not kinds <= {LiftPair.CV, LiftPair.CC}:
        raise PreconditionError("theorem mixed takes CV and CC terms only")


def deform(
    spec: DeformationSpec,
    theorem: Theorem,
    tester: Optional[ZeroTester] = None,
    debug_force: bool = False,
) -> Deformation:
    """pi_TM + lam*c*sum of lifted pairs, with verified hypotheses

    debug_force skips the refusal on failed hypotheses and on a failed
    Jacobi identity of the output; the verdicts are still reported.
    """
    tester = tester or default_tester()
    _validate_theorem(spec, theorem)
    hypotheses = check_hypotheses(spec, tester)
    failed = [h for h in hypotheses if not h.holds]
    if failed:
        if not debug_force:
            logger.error(f"Deformation refused: {failed[0]}")
            raise PreconditionError(failed[0].statement, failed[0].verdict)
        logger.warning(f"Building deformation despite {len(failed)} failed hypotheses")
    lifted = tangent_lift_poisson(spec.base, tester)
    total = lifted.bivector
    for term in spec.terms:
        total = total + term.tensor().scale(spec.factor)
    tensor = check_jacobi(total, tester)
    if not tensor.jacobi.holds and not debug_force:
        raise JacobiFailureError(f"deformed tensor fails the Jacobi identity: {tensor.jacobi}")
    logger.info(f"Deformation {theorem.value} with {len(spec.terms)} terms: Jacobi {tensor.jacobi}")
    return Deformation(spec, tensor, lifted, tuple(hypotheses))


def deform_cv(spec: DeformationSpec, tester: Optional[ZeroTester] = None, debug_force: bool = False) -> PoissonTensor:
    """pi_TM + lam*c*X_C^X_V"""
    return deform(spec, Theorem.CV, tester, debug_force).tensor


def deform_vv(spec: DeformationSpec, tester: Optional[ZeroTester] = None, debug_force: bool = False) -> PoissonTensor:
    """pi_TM + lam*c*sum X_i,V ^ Y_i,V"""
    return deform(spec, Theorem.VV, tester, debug_force).tensor


def deform_mixed(
    spec: DeformationSpec, tester: Optional[ZeroTester] = None, debug_force: bool = False
) -> PoissonTensor:
    """pi_TM + lam*c*sum of CV and CC pairs"""
    return deform(spec, Theorem.MIXED, tester, debug_force).tensor


def pair_tensor_cv(x: MultiVector, tester: Optional[ZeroTester] = None) -> PoissonTensor:
    """X_C ^ X_V, Poisson for any X"""
    return check_jacobi(wedge(complete_lift(x), vertical_lift(x)), tester)


def pair_tensor(
    kind: LiftPair,
    x: MultiVector,
    y: MultiVector,
    tester: Optional[ZeroTester] = None,
    debug_force: bool = False,
) -> PoissonTensor:
    """Undeformed pair tensor; CV and CC need [X, Y] = 0"""
    tester = tester or default_tester()
    term = DeformationTerm(kind, x, y)
    for hypothesis in commutator_hypotheses([term], tester):
        if not hypothesis.holds and not debug_force:
            raise PreconditionError(hypothesis.statement, hypothesis.verdict)
    return check_jacobi(term.tensor(), tester)


def decomposable_condition(x: MultiVector, y: MultiVector, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of [X, Y] ^ X ^ Y == 0, i.e. [X^Y, X^Y] = 0"""
    if x.chart != y.chart:
        raise ChartMismatchError(f"fields on {x.chart} and {y.chart}")
    return _obstruction_verdict(commutator(x, y), x, y, tester or default_tester(), x.has_sqrt or y.has_sqrt)


def compatibility_report(base: PoissonTensor, deformation, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of [pi_TM, D] == 0"""
    tester = tester or default_tester()
    d = deformation.bivector if isinstance(deformation, PoissonTensor) else deformation
    lifted = tangent_lift_poisson(base, tester)
    if d.chart != lifted.chart:
        raise ChartMismatchError(f"deformation on {d.chart}, tangent lift on {lifted.chart}")
    return bracket_verdict(lifted.bivector, d, tester, algebraic=base.has_sqrt or d.has_sqrt)


def vertical_block_tensor(
    chart: Chart, components: Mapping[Tuple[str, str], Any], tester: Optional[ZeroTester] = None
) -> PoissonTensor:
    """Bivector in the (y, y) block with coefficients depending on x only"""
    tangent = tangent_chart(chart)
    n = chart.dimension
    raw = {}
    for (a, b), value in components.items():
        value = as_expr(value)
        if any(s.name not in chart.names for s in value.free_symbols):
            raise ChartMismatchError(f"coefficient {to_text(value)} must depend on base coordinates only")
        raw[(n + chart.index(a), n + chart.index(b))] = value
    return check_jacobi(MultiVector.from_components(tangent, 2, raw), tester)


def preserved_casimirs(
    deformation: Deformation, casimirs: Sequence, tester: Optional[ZeroTester] = None
) -> List[Tuple[sp.Expr, LiftedFunction, Verdict]]:
    """Lifted Casimirs of the base that survive the deformation

    Both lifts qualify when every field of the deformation annihilates c; for a
    purely vertical deformation c o q qualifies unconditionally.
    """
    tester = tester or default_tester()
    spec = deformation.spec
    vertical_only = all(term.kind == LiftPair.VV for term in spec.terms)
    results: List[Tuple[sp.Expr, LiftedFunction, Verdict]] = []
    for c in casimirs:
        c = as_expr(c)
        base_verdict = is_casimir(spec.base, c, tester)
        if not base_verdict.holds:
            raise PreconditionError(f"{to_text(c)} is a Casimir of the base tensor", base_verdict)
        invariant = all(
            tester.is_zero(apply_vector_field(f, c), f.has_sqrt or has_sqrt(c)).holds for _, f in spec.fields()
        )
        if invariant:
            lifts = [pullback(c, spec.base.chart), fiber_linear(c, spec.base.chart)]
        elif vertical_only:
            lifts = [pullback(c, spec.base.chart)]
        else:
            logger.info(f"Casimir {to_text(c)} is not annihilated by the deformation fields")
            continue
        for lift in lifts:
            results.append((c, lift, is_casimir(deformation.tensor, lift.realized, tester)))
    return results
