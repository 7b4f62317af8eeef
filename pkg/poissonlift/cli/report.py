"""
Text reports: matrices, verdict lines and expectation checks
"""

import json
import logging
from typing import Any, Dict, List, Mapping

import typer
from deepdiff import DeepDiff
from rich.console import Console
from rich.text import Text
from tabulate import tabulate

from poissonlift.models.multivector import MultiVector
from poissonlift.models.verdict import Verdict
from poissonlift.symexpr.algebra import normal_form
from poissonlift.symexpr.printer import to_text

logger = logging.getLogger(__name__)

console = Console(highlight=False, soft_wrap=True)


def entry_text(value) -> str:
    return to_text(normal_form(value))


def format_matrix(p: MultiVector) -> str:
    """Full antisymmetric matrix with row and column labels, '0' for absent entries"""
    names = list(p.chart.names)
    rows = [[names[a]] + [entry_text(value) for value in row] for a, row in enumerate(p.matrix())]
    return tabulate(rows, headers=[""] + names, tablefmt="plain", stralign="right", disable_numparse=True)


def matrix_entries(p: MultiVector) -> Dict[str, str]:
    """Upper-triangle entries keyed 'a,b' in canonical printing"""
    names = p.chart.names
    n = p.chart.dimension
    return {f"{names[a]},{names[b]}": entry_text(p.component(a, b)) for a in range(n) for b in range(a + 1, n)}


def compare_entries(expected: Mapping[str, str], computed: Mapping[str, str]) -> List[str]:
    """Readable differences between two entry maps; empty when they agree"""
    diff = DeepDiff(dict(expected), dict(computed))
    lines = []
    for path, change in diff.get("values_changed", {}).items():
        key = path.replace("root['", "").replace("']", "")
        lines.append(f"{key}: expected {change['old_value']}, computed {change['new_value']}")
    for path in diff.get("dictionary_item_added", []):
        lines.append(f"unexpected entry {path}")
    for path in diff.get("dictionary_item_removed", []):
        lines.append(f"missing entry {path}")
    return lines


def echo(text: str = "") -> None:
    typer.echo(text)


def status(label: str, verdict: Verdict) -> None:
    """One verdict line, green when it holds and red otherwise"""
    style = "green" if verdict.holds else "red"
    console.print(Text(f"{label}: {verdict}", style=style))


def flag(text: str, ok: bool) -> None:
    console.print(Text(text, style="green" if ok else "red"))


def emit_json(payload: Dict[str, Any]) -> None:
    typer.echo(json.dumps(payload, indent=2, sort_keys=True))
