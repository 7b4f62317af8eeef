"""
Verdicts about Poisson data

Jacobi identity, Poisson and Hamiltonian vector fields, Casimirs, involution,
compatibility and the Lichnerowicz-Poisson differential.

Sign conventions: X_h = {., h}, so (X_h)^i = sum_j pi^ij d_j h, and
lichnerowicz(pi, h) = [pi, h] = +X_h under the bracket axioms.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import sympy as sp

from poissonlift.exceptions import ChartMismatchError, DegreeError, JacobiFailureError
from poissonlift.models.multivector import MultiVector
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.models.verdict import Verdict
from poissonlift.services.schouten import apply_vector_field, bivector_bracket, lie_derivative, schouten
from poissonlift.symexpr.algebra import as_expr, has_sqrt
from poissonlift.symexpr.zero_test import ZeroTester, default_tester

logger = logging.getLogger(__name__)

Operand = Union[MultiVector, sp.Expr, int, str]


def _tester(tester: Optional[ZeroTester]) -> ZeroTester:
    return tester or default_tester()


def _algebraic(*operands) -> bool:
    """True when any operand carries a square root"""
    for operand in operands:
        if isinstance(operand, PoissonTensor):
            operand = operand.bivector
        if isinstance(operand, MultiVector):
            if operand.has_sqrt:
                return True
        elif operand is not None and has_sqrt(as_expr(operand)):
            return True
    return False


def multivector_verdict(p: MultiVector, tester: Optional[ZeroTester] = None, algebraic: bool = False) -> Verdict:
    """Worst component verdict of P == 0"""
    return _tester(tester).all_zero(p.components.values(), algebraic=algebraic or p.has_sqrt)


def bracket_verdict(
    p: MultiVector, q: MultiVector, tester: Optional[ZeroTester] = None, algebraic: bool = False
) -> Verdict:
    """Verdict of [P, Q] == 0; a bracket above the top degree vanishes"""
    if p.degree + q.degree - 1 > p.chart.dimension:
        return Verdict.proved_zero()
    return multivector_verdict(schouten(p, q), tester, algebraic=algebraic)


def differs_by_zero(p: MultiVector, q: MultiVector, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of P - Q == 0 componentwise"""
    return multivector_verdict(p - q, tester, algebraic=_algebraic(p, q))


def _as_operand(p: Operand, pi: PoissonTensor) -> MultiVector:
    if isinstance(p, MultiVector):
        return p
    return MultiVector.scalar(pi.chart, as_expr(p))


def check_jacobi(b: MultiVector, tester: Optional[ZeroTester] = None) -> PoissonTensor:
    """Tag a bivector with the verdict of [b, b] == 0"""
    if b.degree != 2:
        raise DegreeError(f"Jacobi check needs a bivector, got degree {b.degree}")
    verdict = bracket_verdict(b, b, tester, algebraic=b.has_sqrt)
    logger.info(f"Jacobi verdict on {b.chart}: {verdict}")
    return PoissonTensor(b, verdict)


def _same_chart(pi: PoissonTensor, p: MultiVector) -> None:
    if pi.chart != p.chart:
        raise ChartMismatchError(f"operand on {p.chart} but Poisson tensor on {pi.chart}")


def is_poisson_vf(pi: PoissonTensor, x: MultiVector, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of L_X pi == 0"""
    _same_chart(pi, x)
    if x.degree != 1:
        raise DegreeError(f"Poisson vector field check needs degree 1, got {x.degree}")
    return multivector_verdict(lie_derivative(x, pi.bivector), tester, algebraic=_algebraic(pi, x))


def hamiltonian_vf(pi: PoissonTensor, h: Operand) -> MultiVector:
    """X_h with (X_h)^i = {x^i, h}"""
    h = as_expr(h)
    components = {}
    for i, coordinate in enumerate(pi.chart.symbols):
        components[(i,)] = bivector_bracket(pi.bivector, coordinate, h)
    return MultiVector.from_components(pi.chart, 1, components)


def is_casimir(pi: PoissonTensor, c: Operand, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of X_c == 0"""
    return multivector_verdict(hamiltonian_vf(pi, c), tester, algebraic=_algebraic(pi, c))


def in_involution(pi: PoissonTensor, functions: Sequence[Operand], tester: Optional[ZeroTester] = None) -> Verdict:
    """Worst verdict of {H_i, H_j} == 0 over i < j"""
    functions = [as_expr(h) for h in functions]
    algebraic = _algebraic(pi, *functions)
    brackets = [
        bivector_bracket(pi.bivector, functions[i], functions[j])
        for i in range(len(functions))
        for j in range(i + 1, len(functions))
    ]
    return _tester(tester).all_zero(brackets, algebraic=algebraic)


def _require_poisson(pi: PoissonTensor) -> None:
    if not pi.jacobi.holds:
        raise JacobiFailureError(f"Lichnerowicz differential of a non-Poisson bivector: {pi.jacobi}")


def lichnerowicz(pi: PoissonTensor, p: Operand) -> MultiVector:
    """delta_pi(P) = [pi, P]; refused when the Jacobi verdict is NonZero"""
    _require_poisson(pi)
    p = _as_operand(p, pi)
    _same_chart(pi, p)
    return schouten(pi.bivector, p)


def compatible(pi1: PoissonTensor, pi2: PoissonTensor, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of [pi1, pi2] == 0"""
    if pi1.chart != pi2.chart:
        raise ChartMismatchError(f"compatibility of tensors on {pi1.chart} and {pi2.chart}")
    return bracket_verdict(pi1.bivector, pi2.bivector, tester, algebraic=_algebraic(pi1, pi2))


def deformation_defect(pi: PoissonTensor, p: MultiVector, lam) -> MultiVector:
    """[pi + lam P, pi + lam P]"""
    _same_chart(pi, p)
    if p.degree != 2:
        raise DegreeError(f"deformation direction must be a bivector, got degree {p.degree}")
    deformed = pi.bivector + p.scale(as_expr(lam))
    return schouten(deformed, deformed)


def is_cocycle(pi: PoissonTensor, p: Operand, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of delta_pi(P) == 0"""
    p = _as_operand(p, pi)
    if p.degree == pi.chart.dimension:
        _require_poisson(pi)
        _same_chart(pi, p)
        return Verdict.proved_zero()
    return multivector_verdict(lichnerowicz(pi, p), tester, algebraic=_algebraic(pi, p))


def is_coboundary_of(pi: PoissonTensor, p: Operand, q: Operand, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of P == delta_pi(Q) for the supplied preimage Q"""
    p = _as_operand(p, pi)
    q = _as_operand(q, pi)
    image = lichnerowicz(pi, q)
    if image.degree != p.degree:
        raise DegreeError(f"delta_pi(Q) has degree {image.degree}, P has degree {p.degree}")
    return multivector_verdict(p - image, tester, algebraic=_algebraic(pi, p, q))


def casimir_derivative(
    pi: PoissonTensor, x: MultiVector, c: Operand, tester: Optional[ZeroTester] = None
) -> Tuple[sp.Expr, Verdict]:
    """X(c) and whether it is again a Casimir of pi"""
    image = apply_vector_field(x, c)
    return image, is_casimir(pi, image, tester)


def linear_combination_is_poisson(
    pi1: PoissonTensor, pi2: PoissonTensor, lam, tester: Optional[ZeroTester] = None
) -> PoissonTensor:
    """check_jacobi(pi1 + lam pi2)"""
    if pi1.chart != pi2.chart:
        raise ChartMismatchError(f"pencil of tensors on {pi1.chart} and {pi2.chart}")
    return check_jacobi(pi1.bivector + pi2.bivector.scale(as_expr(lam)), tester)

