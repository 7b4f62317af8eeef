"""
Coordinate charts on M and on its tangent bundle TM
"""

import re
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Optional, Tuple

import sympy as sp

from poissonlift.exceptions import ChartError

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
X_NAME = re.compile(r"^x(.*)$")


class ChartKind(str, Enum):
    BASE = "base"
    TANGENT = "tangent"


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names; a tangent chart lists the base names then their y-partners"""

    names: Tuple[str, ...]
    kind: ChartKind = ChartKind.BASE
    base: Optional["Chart"] = None

    def __post_init__(self):
        if not self.names:
            raise ChartError("a chart needs at least one coordinate")
        for name in self.names:
            if not IDENTIFIER.match(name):
                raise ChartError(f"invalid coordinate name {name!r}")
            if name == "sqrt":
                raise ChartError("'sqrt' is reserved and cannot name a coordinate")
        seen = set()
        for name in self.names:
            if name in seen:
                raise ChartError(f"duplicate coordinate name {name!r}")
            seen.add(name)
        if self.kind == ChartKind.TANGENT:
            if self.base is None or len(self.names) != 2 * self.base.dimension:
                raise ChartError("a tangent chart must have twice the dimension of its base")

    @property
    def dimension(self) -> int:
        return len(self.names)

    @property
    def is_tangent(self) -> bool:
        return self.kind == ChartKind.TANGENT

    @property
    def base_dimension(self) -> int:
        return self.base.dimension if self.is_tangent else self.dimension

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        return tuple(sp.Symbol(n) for n in self.names)

    @property
    def x_names(self) -> Tuple[str, ...]:
        return self.names[: self.base_dimension]

    @property
    def y_names(self) -> Tuple[str, ...]:
        if not self.is_tangent:
            return ()
        return self.names[self.base_dimension :]

    def symbol(self, index: int) -> sp.Symbol:
        return sp.Symbol(self.names[index])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ChartError(f"coordinate {name!r} is not in chart ({', '.join(self.names)})")

    def partner(self, index: int) -> int:
        """x-block <-> y-block involution of a tangent chart"""
        if not self.is_tangent:
            raise ChartError("partner lookup needs a tangent chart")
        n = self.base_dimension
        if not 0 <= index < 2 * n:
            raise ChartError(f"index {index} outside chart of dimension {2 * n}")
        return index + n if index < n else index - n

    def to_dict(self) -> Dict[str, Any]:
        return {"names": list(self.names), "kind": self.kind.value}

    def __str__(self) -> str:
        return f"({', '.join(self.names)})"


def y_name(name: str) -> str:
    """x<suffix> -> y<suffix>; any other name n -> y<n>"""
    match = X_NAME.match(name)
    if match:
        return "y" + match.group(1)
    return "y" + name


def make_chart(names: Iterable[str]) -> Chart:
    return Chart(tuple(names))


def tangent_chart(chart: Chart) -> Chart:
    """Append the y-partner of every base coordinate"""
    if chart.is_tangent:
        raise ChartError("tangent_chart expects a base chart")
    partners = tuple(y_name(n) for n in chart.names)
    clashes = sorted(set(partners) & set(chart.names))
    if clashes:
        raise ChartError(f"fiber coordinate names collide with base names: {', '.join(clashes)}")
    if len(set(partners)) != len(partners):
        raise ChartError(f"fiber coordinate names are not distinct: {', '.join(partners)}")
    logger.debug(f"Tangent chart of {chart}: {partners}")
    return Chart(chart.names + partners, ChartKind.TANGENT, chart)
