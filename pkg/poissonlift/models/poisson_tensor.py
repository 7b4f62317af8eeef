"""
Bivector tagged with its Jacobi verdict
"""

from dataclasses import dataclass
from typing import Any, Dict

from poissonlift.exceptions import DegreeError
from poissonlift.models.chart import Chart
from poissonlift.models.multivector import MultiVector
from poissonlift.models.verdict import Verdict


@dataclass(frozen=True)
class PoissonTensor:
    """A bivector and the verdict of [b, b] == 0 computed for it"""

    bivector: MultiVector
    jacobi: Verdict

    def __post_init__(self):
        if self.bivector.degree != 2:
            raise DegreeError(f"a Poisson tensor is a bivector, got degree {self.bivector.degree}")

    @property
    def chart(self) -> Chart:
        return self.bivector.chart

    @property
    def has_sqrt(self) -> bool:
        return self.bivector.has_sqrt

    def to_dict(self) -> Dict[str, Any]:
        data = self.bivector.to_dict()
        data["jacobi"] = self.jacobi.to_dict()
        return data
