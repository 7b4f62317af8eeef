"""
Shared fixtures: the A_{3,1} Lie-Poisson tensor on R^3 and its charts and lift
"""

from pathlib import Path

import pytest
import sympy as sp

from poissonlift.models.chart import make_chart, tangent_chart
from poissonlift.models.multivector import bivector, vector_field
from poissonlift.services.lift import tangent_lift_poisson
from poissonlift.services.poisson import check_jacobi
from poissonlift.symexpr.zero_test import ZeroTester

x1, x2, x3 = sp.symbols("x1 x2 x3")
y1, y2, y3 = sp.symbols("y1 y2 y3")

EXAMPLES_DIR = Path(__file__).parent.parent / "data" / "examples"


@pytest.fixture
def tester():
    return ZeroTester()


@pytest.fixture
def chart():
    return make_chart(["x1", "x2", "x3"])


@pytest.fixture
def tm_chart(chart):
    return tangent_chart(chart)


@pytest.fixture
def pi(chart, tester):
    """x1 d/dx2 ^ d/dx3"""
    return check_jacobi(bivector(chart, {("x2", "x3"): x1}), tester)


@pytest.fixture
def pi_tm(pi, tester):
    """Tangent lift of pi on the six-dimensional chart"""
    return tangent_lift_poisson(pi, tester)


@pytest.fixture
def field(chart):
    """Vector field on the base chart from name -> coefficient"""

    def build(**components):
        return vector_field(chart, components)

    return build


@pytest.fixture
def examples_dir():
    return EXAMPLES_DIR
