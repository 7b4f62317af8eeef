"""
Lifts from M to TM

Complete and vertical lifts of multivectors, the tangent lift pi_TM of a
Poisson tensor, fiber-linear functions l_df and the lifted Casimir and
involution families. Tangent indices: x_i -> i, y_i -> N + i.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from poissonlift.exceptions import ChartError, JacobiFailureError, LiftConsistencyError, PreconditionError
from poissonlift.models.chart import Chart, tangent_chart
from poissonlift.models.multivector import Components, MultiVector, normalize
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.models.verdict import Verdict, worst
from poissonlift.services.poisson import check_jacobi, in_involution, is_casimir, lichnerowicz
from poissonlift.services.schouten import apply_vector_field, bivector_bracket
from poissonlift.symexpr.algebra import as_expr
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester, default_tester

logger = logging.getLogger(__name__)


class LiftKind(str, Enum):
    PULLBACK = "pullback"
    FIBER_LINEAR = "fiber_linear"


@dataclass(frozen=True)
class LiftedFunction:
    """A base function carried to TM, either as f o q or as l_df"""

    kind: LiftKind
    source: sp.Expr
    realized: sp.Expr

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "source": to_text(self.source), "realized": to_text(self.realized)}

    def __str__(self) -> str:
        return to_text(self.realized)


def _require_base(chart: Chart) -> Chart:
    if chart.is_tangent:
        raise ChartError(f"lifts start from a base chart, got tangent chart {chart}")
    return tangent_chart(chart)


def complete_lift(p: MultiVector) -> MultiVector:
    """P_C: for each slot, keep that slot horizontal and move the others to the fiber,
    plus sum_s d_s(coefficient) y^s on the all-vertical wedge"""
    tangent = _require_base(p.chart)
    n = p.chart.dimension
    symbols = p.chart.symbols
    fiber = tangent.symbols[n:]
    out: Components = {}
    for key, value in p.components.items():
        for position, horizontal in enumerate(key):
            vertical = tuple(n + i for m, i in enumerate(key) if m != position)
            sign = -1 if position % 2 else 1
            lifted = (horizontal,) + vertical
            out[lifted] = out.get(lifted, sp.Integer(0)) + sign * value
        all_vertical = tuple(n + i for i in key)
        correction = sum((sp.diff(value, symbols[s]) * fiber[s] for s in range(n)), sp.Integer(0))
        out[all_vertical] = out.get(all_vertical, sp.Integer(0)) + correction
    return MultiVector(tangent, p.degree, normalize(out))


def vertical_lift(p: MultiVector) -> MultiVector:
    """P_V: every d/dx slot replaced by its d/dy partner, coefficients unchanged"""
    tangent = _require_base(p.chart)
    n = p.chart.dimension
    return MultiVector(tangent, p.degree, {tuple(n + i for i in key): value for key, value in p.components.items()})


def block_tangent_bivector(pi: MultiVector) -> MultiVector:
    """pi_TM from its block form: {x_i, y_j} = pi^ij, {y_i, y_j} = sum_s d_s pi^ij y^s"""
    tangent = _require_base(pi.chart)
    n = pi.chart.dimension
    symbols = pi.chart.symbols
    fiber = tangent.symbols[n:]
    out: Components = {}
    for (i, j), value in pi.components.items():
        out[(i, n + j)] = out.get((i, n + j), sp.Integer(0)) + value
        out[(j, n + i)] = out.get((j, n + i), sp.Integer(0)) - value
        out[(n + i, n + j)] = out.get((n + i, n + j), sp.Integer(0)) + sum(
            (sp.diff(value, symbols[s]) * fiber[s] for s in range(n)), sp.Integer(0)
        )
    return MultiVector(tangent, 2, normalize(out))


def tangent_lift_poisson(pi: PoissonTensor, tester: Optional[ZeroTester] = None) -> PoissonTensor:
    """pi_TM, checked against the complete lift of pi and re-verified for Jacobi"""
    if not pi.jacobi.holds:
        raise JacobiFailureError(f"tangent lift of a non-Poisson bivector: {pi.jacobi}")
    block = block_tangent_bivector(pi.bivector)
    lifted = complete_lift(pi.bivector)
    residual = block - lifted
    if not residual.is_zero:
        raise LiftConsistencyError(f"block formula and complete lift differ:\n{residual.render()}")
    result = check_jacobi(block, tester)
    if not result.jacobi.holds:
        raise JacobiFailureError(f"tangent lift fails the Jacobi identity: {result.jacobi}")
    logger.info(f"Built tangent lift on {block.chart} with {len(block.components)} components")
    return result


def pullback(f, chart: Chart) -> LiftedFunction:
    """f o q_M, the base function read on TM"""
    f = as_expr(f)
    base = chart.base if chart.is_tangent else chart
    outside = sorted(s.name for s in f.free_symbols if s.name not in base.names)
    if outside:
        raise ChartError(f"{to_text(f)} is not a function on {base}: uses {', '.join(outside)}")
    return LiftedFunction(LiftKind.PULLBACK, f, f)


def fiber_linear(f, chart: Chart) -> LiftedFunction:
    """l_df = sum_s (d f / d x^s) y^s"""
    f = as_expr(f)
    if chart.is_tangent:
        chart = chart.base
    tangent = tangent_chart(chart)
    n = chart.dimension
    realized = sum(
        (sp.diff(f, chart.symbols[s]) * tangent.symbols[n + s] for s in range(n)),
        sp.Integer(0),
    )
    return LiftedFunction(LiftKind.FIBER_LINEAR, f, sp.expand(realized))


def lifted_casimirs(
    pi: PoissonTensor, casimirs: Sequence, tester: Optional[ZeroTester] = None
) -> List[Tuple[LiftedFunction, Verdict]]:
    """c o q and l_dc for each Casimir c of pi, with their verdicts on pi_TM"""
    tester = tester or default_tester()
    lifted = tangent_lift_poisson(pi, tester)
    results: List[Tuple[LiftedFunction, Verdict]] = []
    for c in casimirs:
        c = as_expr(c)
        verdict = is_casimir(pi, c, tester)
        if not verdict.holds:
            raise PreconditionError(f"{to_text(c)} is a Casimir of the base tensor", verdict)
        for lift in (pullback(c, pi.chart), fiber_linear(c, pi.chart)):
            results.append((lift, is_casimir(lifted, lift.realized, tester)))
    return results


def lifted_involution(pi: PoissonTensor, functions: Sequence, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict that all H_i o q and l_dH_i are pairwise in involution for pi_TM"""
    tester = tester or default_tester()
    functions = [as_expr(h) for h in functions]
    base_verdict = in_involution(pi, functions, tester)
    if not base_verdict.holds:
        raise PreconditionError("the functions are in involution for the base tensor", base_verdict)
    lifted = tangent_lift_poisson(pi, tester)
    family = [pullback(h, pi.chart).realized for h in functions]
    family += [fiber_linear(h, pi.chart).realized for h in functions]
    return in_involution(lifted, family, tester)


def anchor_apply(f, g, pi: PoissonTensor) -> sp.Expr:
    """a(df)(g) = {f, g}"""
    return bivector_bracket(pi.bivector, f, g)


def algebroid_bracket(pi: PoissonTensor, f, g) -> sp.Expr:
    """Generator of [df, dg] = d{f, g} on exact forms"""
    return bivector_bracket(pi.bivector, f, g)


def bracket_axioms(pi: PoissonTensor, f, g, tester: Optional[ZeroTester] = None) -> Dict[str, Verdict]:
    """The three brackets of pullbacks and fiber-linear functions on pi_TM

    {f o q, g o q} = 0, {f o q, l_dg} = -a(dg)(f) o q = {f, g},
    {l_df, l_dg} = l_d{f, g}.
    """
    tester = tester or default_tester()
    f, g = as_expr(f), as_expr(g)
    lifted = tangent_lift_poisson(pi, tester).bivector
    fq, gq = pullback(f, pi.chart).realized, pullback(g, pi.chart).realized
    lf, lg = fiber_linear(f, pi.chart).realized, fiber_linear(g, pi.chart).realized
    base = algebroid_bracket(pi, f, g)
    algebraic = pi.has_sqrt
    return {
        "pullbacks_commute": tester.is_zero(bivector_bracket(lifted, fq, gq), algebraic),
        "pullback_fiber_linear": tester.is_zero(bivector_bracket(lifted, fq, lg) + anchor_apply(g, f, pi), algebraic),
        "fiber_linear_closed": tester.is_zero(
            bivector_bracket(lifted, lf, lg) - fiber_linear(base, pi.chart).realized, algebraic
        ),
    }


def invariant_function_lifts(x: MultiVector, f, tester: Optional[ZeroTester] = None) -> Dict[str, Verdict]:
    """X_C and X_V applied to f o q and l_df, for f invariant under X"""
    tester = tester or default_tester()
    f = as_expr(f)
    algebraic = x.has_sqrt
    invariance = tester.is_zero(apply_vector_field(x, f), algebraic)
    if not invariance.holds:
        raise PreconditionError(f"X({to_text(f)}) vanishes", invariance)
    xc, xv = complete_lift(x), vertical_lift(x)
    fq, lf = pullback(f, x.chart).realized, fiber_linear(f, x.chart).realized
    return {
        "complete_on_pullback": tester.is_zero(apply_vector_field(xc, fq), algebraic),
        "complete_on_fiber_linear": tester.is_zero(apply_vector_field(xc, lf), algebraic),
        "vertical_on_pullback": tester.is_zero(apply_vector_field(xv, fq), algebraic),
        "vertical_on_fiber_linear": tester.is_zero(apply_vector_field(xv, lf), algebraic),
    }


def cohomology_homomorphism(pi: PoissonTensor, p: MultiVector, tester: Optional[ZeroTester] = None) -> Verdict:
    """Verdict of delta_piTM(P_V) == (delta_pi P)_V"""
    tester = tester or default_tester()
    lifted = tangent_lift_poisson(pi, tester)
    lhs = lichnerowicz(lifted, vertical_lift(p))
    rhs = vertical_lift(lichnerowicz(pi, p))
    algebraic = pi.has_sqrt or p.has_sqrt
    return tester.all_zero((lhs - rhs).components.values(), algebraic)


def all_hold(verdicts: Dict[str, Verdict]) -> Verdict:
    return worst(verdicts.values())
