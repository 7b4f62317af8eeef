"""
Tests for deformations of pi_TM by lifted vector-field pairs
"""

import pytest
import sympy as sp

from poissonlift.exceptions import ChartMismatchError, JacobiFailureError, PreconditionError
from poissonlift.models.chart import make_chart
from poissonlift.models.multivector import bivector, vector_field
from poissonlift.models.verdict import VerdictKind
from poissonlift.services.deform import (
    DeformationSpec,
    DeformationTerm,
    LiftPair,
    Theorem,
    check_hypotheses,
    compatibility_report,
    decomposable_condition,
    deform,
    deform_cv,
    deform_mixed,
    deform_vv,
    pair_tensor,
    pair_tensor_cv,
    preserved_casimirs,
    vertical_block_tensor,
)
from poissonlift.services import deform as deform_module
from poissonlift.services.lift import LiftKind
from poissonlift.services.poisson import check_jacobi
from poissonlift.symexpr import normal_form

x1, x2, x3 = sp.symbols("x1 x2 x3")
y1, y2, y3 = sp.symbols("y1 y2 y3")

PROVED = VerdictKind.PROVED_ZERO
PROBABLY = VerdictKind.PROBABLY_ZERO
NONZERO = VerdictKind.NON_ZERO


def term(kind, x, y, x_label="X", y_label="Y"):
    return DeformationTerm(LiftPair(kind), x, y, x_label, y_label)


def entries(tensor):
    """Nonzero upper entries keyed by coordinate names, in printing normal form"""
    names = tensor.chart.names
    return {(names[a], names[b]): normal_form(v) for (a, b), v in tensor.bivector.components.items()}


@pytest.fixture
def commuting_negative():
    """Constant base tensor with a complete-vertical pair whose fields do not commute"""
    chart = make_chart(["x1", "x2", "x3"])
    base = check_jacobi(bivector(chart, {("x2", "x3"): 1}))
    x = vector_field(chart, {"x1": 1})
    y = vector_field(chart, {"x2": x1, "x3": 1})
    return DeformationSpec(base, (term("CV", x, y),))


class TestWorkedDeformations:
    """Reproduce the matrices of the worked examples"""

    def test_complete_vertical_sqrt_field(self, pi, field, tester):
        x = field(x2="sqrt(x3)")
        deformed = deform_cv(DeformationSpec(pi, (term("CV", x, x),)), tester)
        assert entries(deformed) == {
            ("x2", "y2"): x3,
            ("x2", "y3"): x1,
            ("x3", "y2"): -x1,
            ("y2", "y3"): y1,
        }
        assert deformed.jacobi.kind == PROBABLY

    def test_vertical_pair(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("VV", field(x1=x1, x2=x2), field(x3=1)),))
        deformed = deform_vv(spec, tester)
        assert entries(deformed) == {
            ("x2", "y3"): x1,
            ("x3", "y2"): -x1,
            ("y1", "y3"): x1,
            ("y2", "y3"): y1 + x2,
        }
        assert deformed.jacobi.kind == PROVED

    def test_two_vertical_pairs(self, pi, field, tester):
        spec = DeformationSpec(
            pi,
            (
                term("VV", field(x1=x1, x3=x3), field(x3="-x2/x1"), "X1", "Y1"),
                term("VV", field(x2=x1), field(x3=1), "X2", "Y2"),
            ),
        )
        deformed = deform_vv(spec, tester)
        assert entries(deformed) == {
            ("x2", "y3"): x1,
            ("x3", "y2"): -x1,
            ("y1", "y3"): -x2,
            ("y2", "y3"): y1 + x1,
        }
        assert deformed.jacobi.kind == PROVED

    def test_commuting_complete_vertical_pair(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("CV", field(x2=x3, x3=x1), field(x2=1)),))
        deformed = deform_mixed(spec, tester)
        assert entries(deformed) == {("x2", "y2"): x3, ("x2", "y3"): x1}
        assert deformed.jacobi.kind == PROVED

    def test_two_complete_vertical_pairs(self, pi, field, tester):
        spec = DeformationSpec(
            pi,
            (
                term("CV", field(x3=1), field(x2=x1), "X1", "Y1"),
                term("CV", field(x2=1), field(x2=x3), "X2", "Y2"),
            ),
        )
        deformation = deform(spec, Theorem.MIXED, tester)
        assert entries(deformation.tensor) == {("x2", "y2"): x3, ("x2", "y3"): x1, ("y2", "y3"): y1}
        assert deformation.tensor.jacobi.kind == PROVED
        accepted = [h for h in deformation.hypotheses if h.note]
        assert [h.statement for h in accepted] == ["[X1, Y2]^Y1^X2 = 0"]
        assert accepted[0].note.startswith("[X1, Y2] = 0 fails: NonZero")
        assert all(h.holds for h in deformation.hypotheses)


class TestHypotheses:
    """Test hypothesis verification and refusals"""

    def test_non_commuting_fields_are_refused(self, commuting_negative, tester):
        with pytest.raises(PreconditionError) as info:
            deform(commuting_negative, Theorem.MIXED, tester)
        assert info.value.hypothesis == "[X, Y] = 0"

    @pytest.mark.parametrize("kind", ["CV", "CC"])
    def test_single_term_commutator_is_strict(self, chart, field, tester, kind):
        """[X, Y] = d/dx1 is refused even though [X, Y] ^ X ^ Y vanishes"""
        zero = check_jacobi(bivector(chart, {}), tester)
        x, y = field(x1=1), field(x1=x1)
        assert decomposable_condition(x, y, tester).holds
        with pytest.raises(PreconditionError) as info:
            deform(DeformationSpec(zero, (term(kind, x, y),)), Theorem.MIXED, tester)
        assert info.value.hypothesis == "[X, Y] = 0"
        assert info.value.verdict.kind == NONZERO
        with pytest.raises(PreconditionError):
            pair_tensor(LiftPair(kind), x, y, tester)

    def test_debug_force_reports_jacobi_failure(self, commuting_negative, tester):
        first = deform(commuting_negative, Theorem.MIXED, tester, debug_force=True)
        assert first.tensor.jacobi.kind == NONZERO
        again = deform(commuting_negative, Theorem.MIXED, tester, debug_force=True)
        assert again.tensor.jacobi.witness == first.tensor.jacobi.witness

    def test_theorem_term_kinds(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("CV", field(x2=1), field(x3=1)),))
        with pytest.raises(PreconditionError):
            deform(spec, Theorem.VV, tester)
        with pytest.raises(PreconditionError):
            deform(spec, Theorem.CV, tester)
        with pytest.raises(PreconditionError):
            deform(DeformationSpec(pi, ()), Theorem.MIXED, tester)

    def test_fields_must_be_poisson(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("VV", field(x1=x1), field(x3=1)),))
        hypotheses = check_hypotheses(spec, tester)
        failed = [h.statement for h in hypotheses if not h.holds]
        assert failed == ["X is a Poisson vector field"]
        with pytest.raises(PreconditionError):
            deform_vv(spec, tester)

    def test_casimir_factor(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("VV", field(x1=x1, x2=x2), field(x3=1)),), lam=sp.Integer(2), casimir=x1)
        deformed = deform_vv(spec, tester)
        assert deformed.bivector.component_by_name("y1", "y3") == 2 * x1**2
        bad = DeformationSpec(pi, spec.terms, casimir=x2)
        with pytest.raises(PreconditionError):
            deform_vv(bad, tester)

    def test_fields_on_the_base_chart(self, pi, tm_chart):
        x = vector_field(tm_chart, {"y1": 1})
        with pytest.raises(ChartMismatchError):
            DeformationSpec(pi, (term("VV", x, x),))


class TestPairTensors:
    """Test undeformed pair tensors and related reports"""

    def test_complete_vertical_of_one_field(self, field, tester):
        assert pair_tensor_cv(field(x3=x1 * x2, x1=x2**2), tester).jacobi.kind == PROVED

    def test_pair_tensor_needs_commuting_fields(self, field, tester):
        x, y = field(x1=1), field(x2=x1, x3=1)
        with pytest.raises(PreconditionError):
            pair_tensor(LiftPair.CC, x, y, tester)
        assert pair_tensor(LiftPair.VV, x, y, tester).jacobi.kind == PROVED

    def test_decomposable_condition(self, field, tester):
        assert decomposable_condition(field(x1=1), field(x2=x1, x3=1), tester).kind == NONZERO
        assert decomposable_condition(field(x1=1), field(x2=x1), tester).kind == PROVED

    def test_vertical_block(self, chart, tester):
        block = vertical_block_tensor(chart, {("x1", "x2"): x3**2, ("x2", "x3"): x1}, tester)
        assert block.jacobi.kind == PROVED
        assert block.bivector.component_by_name("y1", "y2") == x3**2
        with pytest.raises(ChartMismatchError):
            vertical_block_tensor(chart, {("x1", "x2"): "y3"}, tester)

    def test_compatibility_report(self, pi, field, tester):
        pair = pair_tensor(LiftPair.VV, field(x1=x1, x2=x2), field(x3=1), tester)
        assert compatibility_report(pi, pair, tester).kind == PROVED


class TestPreservedCasimirs:
    """Test which lifted Casimirs survive a deformation"""

    def test_vertical_deformation_keeps_pullbacks(self, pi, field, tester):
        deformation = deform(DeformationSpec(pi, (term("VV", field(x1=x1, x2=x2), field(x3=1)),)), Theorem.VV, tester)
        results = preserved_casimirs(deformation, ["x1"], tester)
        assert [(lift.kind, verdict.kind) for _, lift, verdict in results] == [(LiftKind.PULLBACK, PROVED)]

    def test_invariant_casimir_keeps_both_lifts(self, pi, field, tester):
        spec = DeformationSpec(pi, (term("CV", field(x2=x3, x3=x1), field(x2=1)),))
        deformation = deform(spec, Theorem.MIXED, tester)
        results = preserved_casimirs(deformation, ["x1"], tester)
        assert [lift.realized for _, lift, _ in results] == [x1, y1]
        assert all(verdict.kind == PROVED for _, _, verdict in results)

    def test_requires_base_casimir(self, pi, field, tester):
        deformation = deform(DeformationSpec(pi, (term("VV", field(x1=x1, x2=x2), field(x3=1)),)), Theorem.VV, tester)
        with pytest.raises(PreconditionError):
            preserved_casimirs(deformation, ["x2"], tester)


def test_jacobi_failure_without_debug_force(pi, field, tester, monkeypatch):
    """A deformation whose result fails Jacobi is refused even when its hypotheses pass"""
    monkeypatch.setattr(deform_module, "check_hypotheses", lambda spec, tester=None: [])
    spec = DeformationSpec(pi, (term("CC", field(x1=1), field(x2=x1, x3=1)),))
    with pytest.raises(JacobiFailureError):
        deform(spec, Theorem.MIXED, tester)
