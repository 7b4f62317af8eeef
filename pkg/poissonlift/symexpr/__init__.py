"""
Expression engine: parsing, printing, differentiation and zero testing
"""

from poissonlift.symexpr.algebra import (
    Sqrt,
    as_expr,
    canonical,
    diff,
    eval_expr,
    free_coordinates,
    has_sqrt,
    normal_form,
)
from poissonlift.symexpr.parser import parse, tokenize
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester, default_tester, is_zero

__all__ = [
    "Sqrt",
    "ZeroTester",
    "as_expr",
    "canonical",
    "default_tester",
    "diff",
    "eval_expr",
    "free_coordinates",
    "has_sqrt",
    "is_zero",
    "normal_form",
    "parse",
    "to_text",
    "tokenize",
]
