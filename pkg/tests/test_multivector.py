"""
Tests for multivector storage, the wedge product and the Schouten bracket
"""

import pytest
import sympy as sp

from poissonlift.exceptions import ChartMismatchError, DegreeError
from poissonlift.models.chart import make_chart
from poissonlift.models.multivector import MultiVector, bivector, multivector, vector_field, wedge
from poissonlift.models.verdict import VerdictKind
from poissonlift.services.poisson import differs_by_zero
from poissonlift.services.schouten import (
    apply_vector_field,
    bivector_bracket,
    commutator,
    lie_derivative,
    schouten,
)
from poissonlift.symexpr import Sqrt

x1, x2, x3 = sp.symbols("x1 x2 x3")


class TestMultiVector:
    """Test sparse antisymmetric storage"""

    def test_ordering_sign_is_folded(self, chart):
        b = bivector(chart, {("x3", "x2"): x1})
        assert b.components == {(1, 2): -x1}
        assert b.component_by_name("x2", "x3") == -x1
        assert b.component_by_name("x3", "x2") == x1

    def test_repeated_index_vanishes(self, chart):
        assert MultiVector.from_components(chart, 2, {(1, 1): 5}).is_zero
        assert multivector(chart, 3, {("x1", "x2", "x1"): x3}).is_zero

    def test_zero_components_are_dropped(self, chart):
        b = bivector(chart, {("x1", "x2"): x1 - x1, ("x2", "x3"): 1})
        assert list(b.components) == [(1, 2)]

    def test_matrix_is_antisymmetric(self, pi):
        m = pi.bivector.matrix()
        assert m[1][2] == x1
        assert m[2][1] == -x1
        assert all(m[i][i] == 0 for i in range(3))

    def test_arithmetic(self, chart):
        a = vector_field(chart, {"x1": x2})
        b = vector_field(chart, {"x1": -x2, "x3": 1})
        assert (a + b).components == {(2,): 1}
        assert (a - a).is_zero
        assert (a * 3).component(0) == 3 * x2
        assert (2 * a).component(0) == 2 * x2

    def test_incompatible_operands(self, chart, tm_chart):
        with pytest.raises(DegreeError):
            vector_field(chart, {"x1": 1}) + bivector(chart, {("x1", "x2"): 1})
        with pytest.raises(ChartMismatchError):
            vector_field(chart, {"x1": 1}) + vector_field(tm_chart, {"y1": 1})

    def test_render(self, pi, chart):
        assert pi.bivector.render() == "(x2,x3) : x1"
        assert MultiVector.zero(chart, 2).render() == "0"
        assert pi.bivector.to_dict()["components"] == {"x2,x3": "x1"}

    def test_simplified_folds_sqrt_powers(self, chart):
        x = vector_field(chart, {"x1": Sqrt(x3) ** 2 - x3, "x2": Sqrt(x3) ** 2})
        assert len(x.components) == 2
        assert x.simplified().components == {(1,): x3}

    def test_substitute_and_on_chart(self, pi):
        assert pi.bivector.substitute({"x1": 2}).components == {(1, 2): 2}
        moved = pi.bivector.on_chart(make_chart(["u1", "u2", "u3"]))
        assert moved.render() == "(u2,u3) : x1"

    def test_scalar_value(self, chart):
        assert MultiVector.scalar(chart, "x1*x2").value == x1 * x2
        with pytest.raises(DegreeError):
            vector_field(chart, {"x1": 1}).value


class TestWedge:
    """Test the exterior product"""

    def test_vector_fields_anticommute(self, chart):
        a = vector_field(chart, {"x1": x2, "x2": 1})
        b = vector_field(chart, {"x3": x1})
        assert wedge(a, b) == -wedge(b, a)
        assert wedge(a, a).is_zero

    def test_degrees_add(self, chart, pi):
        x = vector_field(chart, {"x1": 1})
        assert wedge(x, pi.bivector).degree == 3
        assert wedge(x, pi.bivector).components == {(0, 1, 2): x1}

    def test_chart_mismatch(self, chart, tm_chart):
        with pytest.raises(ChartMismatchError):
            wedge(vector_field(chart, {"x1": 1}), vector_field(tm_chart, {"y1": 1}))

    def test_degree_above_dimension(self, chart, pi):
        """No multivector outlives the top degree of its chart"""
        with pytest.raises(DegreeError):
            MultiVector(chart, 4, {})
        with pytest.raises(DegreeError):
            MultiVector.zero(make_chart(["x1", "x2"]), 3)
        with pytest.raises(DegreeError):
            wedge(pi.bivector, pi.bivector)
        top = wedge(vector_field(chart, {"x1": 1}), pi.bivector)
        with pytest.raises(DegreeError):
            wedge(top, vector_field(chart, {"x2": 1}))


class TestSchouten:
    """Test the Schouten-Nijenhuis bracket against its base cases"""

    def test_commutator(self, chart):
        d1 = vector_field(chart, {"x1": 1})
        y = vector_field(chart, {"x2": x1})
        assert commutator(d1, y).components == {(1,): 1}
        assert commutator(y, d1).components == {(1,): -1}

    def test_vector_field_on_function(self, chart):
        x = vector_field(chart, {"x1": x2})
        f = MultiVector.scalar(chart, x1**2)
        assert schouten(x, f).value == 2 * x1 * x2
        assert schouten(f, x).value == -2 * x1 * x2
        assert apply_vector_field(x, x1**2) == 2 * x1 * x2

    def test_functions_commute(self, chart):
        bracket = schouten(MultiVector.scalar(chart, x1), MultiVector.scalar(chart, x2))
        assert bracket.degree == 0
        assert bracket.is_zero

    def test_scalar_operands_are_promoted(self, chart):
        x = vector_field(chart, {"x3": x1})
        assert schouten(x, x3**2).value == 2 * x1 * x3

    def test_linear_poisson_tensor(self, pi):
        assert schouten(pi.bivector, pi.bivector).is_zero

    def test_graded_antisymmetry_vector_bivector(self, chart, pi, tester):
        x = vector_field(chart, {"x1": x2 * x3, "x2": x1})
        verdict = differs_by_zero(schouten(x, pi.bivector), -schouten(pi.bivector, x), tester)
        assert verdict.kind == VerdictKind.PROVED_ZERO

    def test_bracket_above_dimension(self, chart, pi):
        trivector = multivector(chart, 3, {("x1", "x2", "x3"): x1})
        with pytest.raises(DegreeError):
            schouten(trivector, pi.bivector)
        assert schouten(trivector, vector_field(chart, {"x1": 1})).components == {(0, 1, 2): -1}

    def test_lie_derivative_needs_vector_field(self, pi):
        with pytest.raises(DegreeError):
            lie_derivative(pi.bivector, pi.bivector)

    def test_bivector_bracket(self, pi):
        assert bivector_bracket(pi.bivector, x2, x3) == x1
        assert bivector_bracket(pi.bivector, x3, x2) == -x1
        assert bivector_bracket(pi.bivector, x1, x2) == 0
