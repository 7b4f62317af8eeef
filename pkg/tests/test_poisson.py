"""
Tests for Jacobi, Poisson vector field, Casimir and cohomology verdicts
"""

import pytest
import sympy as sp

from poissonlift.exceptions import ChartMismatchError, DegreeError, JacobiFailureError
from poissonlift.models.chart import make_chart
from poissonlift.models.multivector import bivector, multivector, vector_field
from poissonlift.models.verdict import VerdictKind
from poissonlift.services.poisson import (
    casimir_derivative,
    check_jacobi,
    compatible,
    deformation_defect,
    differs_by_zero,
    hamiltonian_vf,
    in_involution,
    is_casimir,
    is_coboundary_of,
    is_cocycle,
    is_poisson_vf,
    lichnerowicz,
    linear_combination_is_poisson,
    multivector_verdict,
)

x1, x2, x3 = sp.symbols("x1 x2 x3")

PROVED = VerdictKind.PROVED_ZERO
NONZERO = VerdictKind.NON_ZERO


@pytest.fixture
def not_poisson(chart, tester):
    """d1^d2 + x2 d2^d3 fails the Jacobi identity"""
    return check_jacobi(bivector(chart, {("x1", "x2"): 1, ("x2", "x3"): x2}), tester)


class TestJacobi:
    """Test check_jacobi"""

    def test_linear_tensor(self, pi):
        assert pi.jacobi.kind == PROVED

    def test_failure_has_witness(self, not_poisson):
        assert not_poisson.jacobi.kind == NONZERO
        assert set(not_poisson.jacobi.witness_point()) <= {"x1", "x2", "x3"}

    def test_zero_tensor(self, chart, tester):
        assert check_jacobi(bivector(chart, {}), tester).jacobi.kind == PROVED

    def test_needs_bivector(self, chart):
        with pytest.raises(DegreeError):
            check_jacobi(vector_field(chart, {"x1": 1}))

    def test_sqrt_coefficients_are_sampled(self, chart, tester):
        b = bivector(chart, {("x2", "x3"): "sqrt(x1)"})
        assert check_jacobi(b, tester).jacobi.kind == VerdictKind.PROBABLY_ZERO

    def test_every_planar_bivector_is_poisson(self, tester):
        plane = make_chart(["x1", "x2"])
        b = bivector(plane, {("x1", "x2"): x1**2 + x2})
        assert check_jacobi(b, tester).jacobi.kind == PROVED


class TestVectorFields:
    """Test Poisson and Hamiltonian vector fields"""

    def test_poisson_vector_fields(self, pi, field, tester):
        assert is_poisson_vf(pi, field(x2=1), tester).kind == PROVED
        assert is_poisson_vf(pi, field(x1=x1, x2=x2), tester).kind == PROVED
        assert is_poisson_vf(pi, field(x1=x1), tester).kind == NONZERO

    def test_sqrt_field_is_probably_poisson(self, pi, field, tester):
        verdict = is_poisson_vf(pi, field(x2="sqrt(x3)"), tester)
        assert verdict.kind == VerdictKind.PROBABLY_ZERO

    def test_chart_mismatch(self, pi, tm_chart):
        with pytest.raises(ChartMismatchError):
            is_poisson_vf(pi, vector_field(tm_chart, {"y1": 1}))

    def test_hamiltonian_vector_field(self, pi):
        x_h = hamiltonian_vf(pi, "x2")
        assert x_h.components == {(2,): -x1}
        assert hamiltonian_vf(pi, x1).is_zero

    def test_hamiltonian_fields_are_poisson(self, pi, tester):
        assert is_poisson_vf(pi, hamiltonian_vf(pi, "x2*x3^2 + x1*x2"), tester).kind == PROVED


class TestCasimirs:
    """Test Casimir and involution verdicts"""

    def test_casimir(self, pi, tester):
        assert is_casimir(pi, "x1", tester).kind == PROVED
        assert is_casimir(pi, "x1^3 - 2*x1", tester).kind == PROVED
        assert is_casimir(pi, "x2", tester).kind == NONZERO

    def test_involution(self, pi, tester):
        assert in_involution(pi, ["x1", "x2", "x1*x3"], tester).kind == NONZERO
        assert in_involution(pi, ["x1", "x2"], tester).kind == PROVED
        assert in_involution(pi, ["x2", "x3"], tester).kind == NONZERO

    def test_casimir_derivative(self, pi, field, tester):
        image, verdict = casimir_derivative(pi, field(x1=1), x1**2, tester)
        assert image == 2 * x1
        assert verdict.kind == PROVED


class TestLichnerowicz:
    """Test the Lichnerowicz-Poisson differential"""

    def test_function_maps_to_hamiltonian_field(self, pi, tester):
        h = "x2*x3 + x1^2"
        verdict = differs_by_zero(lichnerowicz(pi, h), hamiltonian_vf(pi, h), tester)
        assert verdict.kind == PROVED

    def test_squares_to_zero(self, pi, field, tester):
        once = lichnerowicz(pi, field(x1=x2 * x3, x3=x1**2))
        assert once.degree == 2
        assert multivector_verdict(lichnerowicz(pi, once), tester).kind == PROVED

    def test_refuses_non_poisson(self, not_poisson):
        with pytest.raises(JacobiFailureError):
            lichnerowicz(not_poisson, "x1")

    def test_cocycles(self, pi, field, tester):
        assert is_cocycle(pi, "x1", tester).kind == PROVED
        assert is_cocycle(pi, field(x2=1), tester).kind == PROVED
        assert is_cocycle(pi, field(x1=x1), tester).kind == NONZERO

    def test_top_degree_is_a_cocycle(self, pi, chart, tester):
        trivector = multivector(chart, 3, {("x1", "x2", "x3"): x2**2})
        assert is_cocycle(pi, trivector, tester).kind == PROVED

    def test_coboundary(self, pi, tester):
        assert is_coboundary_of(pi, hamiltonian_vf(pi, "x2"), "x2", tester).kind == PROVED
        assert is_coboundary_of(pi, hamiltonian_vf(pi, "x2"), "x3", tester).kind == NONZERO


class TestCompatibility:
    """Test bi-Hamiltonian pairs and deformation defects"""

    def test_compatible_pair(self, pi, chart, tester):
        constant = check_jacobi(bivector(chart, {("x1", "x2"): 1}), tester)
        assert compatible(pi, constant, tester).kind == PROVED
        pencil = linear_combination_is_poisson(pi, constant, 3, tester)
        assert pencil.jacobi.kind == PROVED
        assert pencil.bivector.component_by_name("x1", "x2") == 3

    @pytest.mark.parametrize("lam", [1, -1, sp.Rational(7, 3), 3])
    def test_pencil(self, pi, chart, tester, lam):
        """pi + lam pi' stays Poisson exactly when the pair is compatible"""
        constant = check_jacobi(bivector(chart, {("x1", "x2"): 1}), tester)
        pencil = linear_combination_is_poisson(pi, constant, lam, tester)
        assert pencil.jacobi.kind == PROVED
        assert pencil.bivector.component_by_name("x1", "x2") == lam
        other = check_jacobi(bivector(chart, {("x1", "x2"): x2}), tester)
        assert linear_combination_is_poisson(pi, other, lam, tester).jacobi.kind == NONZERO

    def test_incompatible_pair(self, pi, chart, tester):
        other = check_jacobi(bivector(chart, {("x1", "x2"): x2}), tester)
        assert other.jacobi.kind == PROVED
        assert compatible(pi, other, tester).kind == NONZERO
        assert linear_combination_is_poisson(pi, other, 1, tester).jacobi.kind == NONZERO

    def test_deformation_defect(self, pi, chart, tester):
        direction = bivector(chart, {("x1", "x2"): 1})
        assert multivector_verdict(deformation_defect(pi, direction, "2"), tester).kind == PROVED
        with pytest.raises(DegreeError):
            deformation_defect(pi, vector_field(chart, {"x1": 1}), 1)
