"""
Verdict model for symbolic zero tests
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Optional, Tuple

import sympy as sp


class VerdictKind(str, Enum):
    """Outcome of a zero test, ordered from strongest to weakest claim"""

    PROVED_ZERO = "ProvedZero"
    PROBABLY_ZERO = "ProbablyZero"
    NON_ZERO = "NonZero"


_SEVERITY = {
    VerdictKind.PROVED_ZERO: 0,
    VerdictKind.PROBABLY_ZERO: 1,
    VerdictKind.NON_ZERO: 2,
}


@dataclass(frozen=True)
class Verdict:
    """Result of deciding whether an expression (or a family of them) vanishes"""

    kind: VerdictKind
    samples: Optional[int] = None
    witness: Optional[Tuple[Tuple[str, sp.Rational], ...]] = None
    value: Optional[float] = None

    @classmethod
    def proved_zero(cls) -> "Verdict":
        return cls(VerdictKind.PROVED_ZERO)

    @classmethod
    def probably_zero(cls, samples: int) -> "Verdict":
        return cls(VerdictKind.PROBABLY_ZERO, samples=samples)

    @classmethod
    def non_zero(cls, witness: Dict[str, sp.Rational], value: float) -> "Verdict":
        return cls(VerdictKind.NON_ZERO, witness=tuple(sorted(witness.items())), value=value)

    @property
    def holds(self) -> bool:
        """True unless a witness of non-vanishing was found"""
        return self.kind != VerdictKind.NON_ZERO

    @property
    def severity(self) -> int:
        return _SEVERITY[self.kind]

    def witness_point(self) -> Dict[str, sp.Rational]:
        return dict(self.witness or ())

    def to_dict(self) -> Dict[str, Any]:
        """Convert Verdict to dictionary"""
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.samples is not None:
            data["samples"] = self.samples
        if self.witness is not None:
            data["witness"] = {name: str(value) for name, value in self.witness}
            data["value"] = self.value
        return data

    def __str__(self) -> str:
        if self.kind == VerdictKind.PROBABLY_ZERO:
            return f"ProbablyZero({self.samples})"
        if self.kind == VerdictKind.NON_ZERO:
            point = ", ".join(f"{name}={value}" for name, value in self.witness or ())
            return f"NonZero at {{{point}}} value={self.value:.6g}"
        return self.kind.value


def worst(verdicts: Iterable[Verdict]) -> Verdict:
    """Aggregate NonZero > ProbablyZero > ProvedZero; empty input is ProvedZero"""
    result = Verdict.proved_zero()
    for verdict in verdicts:
        if verdict.severity > result.severity:
            result = verdict
            if verdict.kind == VerdictKind.NON_ZERO:
                break
    return result
