"""
Exception hierarchy for poissonlift

Library code raises these; only the command-line front end catches them.
"""

from typing import Iterable, Optional


class PoissonLiftError(Exception):
    """Base class for every error raised by the package"""


class ExprSyntaxError(PoissonLiftError):
    """Expression text does not conform to the grammar"""

    def __init__(self, offset: int, expected: Iterable[str], found: str = ""):
        self.offset = offset
        self.expected = sorted(set(expected))
        self.found = found
        shown = found if found else "end of input"
        super().__init__(
            f"syntax error at offset {offset}: expected one of {', '.join(self.expected)}; found {shown!r}"
        )


class UnknownFunctionError(PoissonLiftError):
    """A function other than sqrt was applied"""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown function {name!r} at offset {offset} (only sqrt is allowed)")


class UnknownVariableError(PoissonLiftError):
    """Identifier not declared in the chart the expression is read against"""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown coordinate {name!r} at offset {offset}")


class FragmentError(PoissonLiftError):
    """Operation only defined on the rational-function fragment"""


class EvaluationError(PoissonLiftError):
    """Missing assignment or domain error during float evaluation"""


class ZeroTestIndeterminateError(PoissonLiftError):
    """Every sampling attempt of the randomized zero test hit a domain error"""


class ChartError(PoissonLiftError):
    """Invalid chart construction or lookup"""


class ChartMismatchError(PoissonLiftError):
    """Operands live on different charts"""


class DegreeError(PoissonLiftError):
    """Operand has the wrong multivector degree"""


class JacobiFailureError(PoissonLiftError):
    """A Poisson tensor was required but the Jacobi identity fails"""


class PreconditionError(PoissonLiftError):
    """A theorem hypothesis failed verification"""

    def __init__(self, hypothesis: str, verdict: Optional[object] = None):
        self.hypothesis = hypothesis
        self.verdict = verdict
        detail = f" ({verdict})" if verdict is not None else ""
        super().__init__(f"precondition failed: {hypothesis}{detail}")


class LiftConsistencyError(PoissonLiftError):
    """Block formula for the tangent lift disagrees with the complete lift"""


class NonlinearTensorError(PoissonLiftError):
    """A component is not a homogeneous linear polynomial"""


class StructureConstantsError(PoissonLiftError):
    """Structure constants violate antisymmetry or the Jacobi identity"""


class LinearMapError(PoissonLiftError):
    """Malformed linear coordinate change"""


class SingularMapError(LinearMapError):
    """Linear coordinate change is not invertible"""


class DocumentError(PoissonLiftError):
    """Problem document is malformed or references an unknown name"""
