"""
poissonlift command-line interface

Exit status: 0 when everything verified, 1 on a NonZero verdict or a failed
expectation, 2 on input errors and refused theorem hypotheses.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import typer

from poissonlift import __version__
from poissonlift.cli import report
from poissonlift.config import Settings, load_settings
from poissonlift.exceptions import DocumentError, PoissonLiftError, PreconditionError
from poissonlift.models.document import Expectation, ProblemDocument
from poissonlift.models.poisson_tensor import PoissonTensor
from poissonlift.models.verdict import Verdict, worst
from poissonlift.services.changevar import (
    StructureConstants,
    match_table,
    pushforward_poisson,
    structure_constants,
    table_mismatches,
)
from poissonlift.services.document_service import DocumentService, ProblemContext
from poissonlift.services.lift import complete_lift, tangent_lift_poisson, vertical_lift
from poissonlift.services.poisson import is_casimir, is_poisson_vf
from poissonlift.services.schouten import schouten
from poissonlift.symexpr.printer import to_text
from poissonlift.symexpr.zero_test import ZeroTester

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NONZERO = 1
EXIT_INPUT = 2

app = typer.Typer(help="Build and verify Poisson structures on tangent bundles.", no_args_is_help=True)


@dataclass
class CliState:
    settings: Settings
    tester: ZeroTester
    doc: Optional[str]
    debug_force: bool
    json_output: bool
    service: DocumentService
    verbose: bool = False

    def context(self) -> ProblemContext:
        if self.doc is None:
            raise DocumentError("this command needs a problem document (--doc PATH, or '-' for stdin)")
        return ProblemContext(self.service.load(self.doc), self.tester, self.debug_force)


def configure_logging(level: str, log_file: Optional[str]) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def _run(ctx: typer.Context, action: Callable[[CliState], int]) -> None:
    """Run a command body and map errors to exit statuses"""
    state: CliState = ctx.obj
    try:
        code = action(state)
    except PreconditionError as e:
        logger.error(f"Precondition violation: {e}")
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=EXIT_INPUT)
    except PoissonLiftError as e:
        logger.error(f"Command failed: {e}")
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=EXIT_INPUT)
    raise typer.Exit(code=code)


def _verdict_result(state: CliState, operation: str, verdict: Verdict, label: str) -> int:
    if state.json_output:
        payload = {"operation": operation, "verdict": verdict.kind.value}
        payload.update({k: v for k, v in verdict.to_dict().items() if k != "kind"})
        report.emit_json(payload)
    else:
        report.status(label, verdict)
    return EXIT_OK if verdict.holds else EXIT_NONZERO


@app.callback()
def main(
    ctx: typer.Context,
    doc: Optional[str] = typer.Option(None, "--doc", help="Problem document (YAML); '-' reads stdin"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Zero-test RNG seed"),
    samples: Optional[int] = typer.Option(None, "--samples", help="Random points per zero test"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Relative zero-test tolerance"),
    debug_force: bool = typer.Option(False, "--debug-force", help="Bypass theorem preconditions"),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable verdict output"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show the verdict behind each expectation line"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Global options apply to every subcommand."""
    settings = load_settings()
    configure_logging(log_level or settings.log_level, settings.log_file)
    tester = ZeroTester.from_settings(settings, seed=seed, samples=samples, tolerance=tol)
    logger.debug(f"poissonlift {__version__} with {tester}")
    ctx.obj = CliState(settings, tester, doc, debug_force, json_output, DocumentService(settings), verbose)


@app.command("check-jacobi")
def check_jacobi_cmd(ctx: typer.Context, tensor: str = typer.Argument(..., help="Tensor, lift or deformation name")):
    """Verify [pi, pi] = 0."""

    def action(state: CliState) -> int:
        result = state.context().tensor(tensor)
        if not state.json_output:
            report.echo(report.format_matrix(result.bivector))
        return _verdict_result(state, "check-jacobi", result.jacobi, f"Jacobi {tensor}")

    _run(ctx, action)


@app.command("poisson-vf")
def poisson_vf_cmd(ctx: typer.Context, tensor: str, field: str):
    """Verify L_X pi = 0."""

    def action(state: CliState) -> int:
        context = state.context()
        verdict = is_poisson_vf(context.tensor(tensor), context.field(field), state.tester)
        return _verdict_result(state, "poisson-vf", verdict, f"{field} is a Poisson vector field of {tensor}")

    _run(ctx, action)


@app.command("lift")
def lift_cmd(
    ctx: typer.Context,
    name: str,
    complete: bool = typer.Option(False, "--complete", help="Complete lift"),
    vertical: bool = typer.Option(False, "--vertical", help="Vertical lift"),
):
    """Lift a field or tensor to TM (tangent lift pi_TM for tensors by default)."""

    def action(state: CliState) -> int:
        if complete and vertical:
            raise DocumentError("choose one of --complete and --vertical")
        context = state.context()
        source = context.multivector(name)
        if vertical:
            lifted = vertical_lift(source)
        elif complete or source.degree != 2:
            lifted = complete_lift(source)
        else:
            lifted = tangent_lift_poisson(context.tensor(name), state.tester).bivector
        if state.json_output:
            report.emit_json({"operation": "lift", "result": lifted.to_dict()})
        elif lifted.degree == 2:
            report.echo(report.format_matrix(lifted))
        else:
            report.echo(lifted.render())
        return EXIT_OK

    _run(ctx, action)


@app.command("deform")
def deform_cmd(ctx: typer.Context, spec: str):
    """Build a deformation of pi_TM after verifying its hypotheses."""

    def action(state: CliState) -> int:
        deformation = state.context().deformation(spec)
        tensor = deformation.tensor
        if state.json_output:
            report.emit_json(
                {
                    "operation": "deform",
                    "verdict": tensor.jacobi.kind.value,
                    "jacobi": tensor.jacobi.to_dict(),
                    "hypotheses": [h.to_dict() for h in deformation.hypotheses],
                    "tensor": tensor.bivector.to_dict(),
                }
            )
        else:
            for hypothesis in deformation.hypotheses:
                report.flag(f"hypothesis {hypothesis}", hypothesis.holds)
            report.echo(report.format_matrix(tensor.bivector))
            report.status(f"Jacobi {spec}", tensor.jacobi)
        return EXIT_OK if tensor.jacobi.holds else EXIT_NONZERO

    _run(ctx, action)


@app.command("schouten")
def schouten_cmd(ctx: typer.Context, a: str, b: str):
    """Schouten-Nijenhuis bracket [A, B] of named fields, tensors or expressions."""

    def action(state: CliState) -> int:
        context = state.context()
        result = schouten(context.multivector(a), context.multivector(b))
        if state.json_output:
            report.emit_json({"operation": "schouten", "result": result.to_dict()})
        else:
            report.echo(f"[{a}, {b}] (degree {result.degree}):")
            report.echo(result.render())
        return EXIT_OK

    _run(ctx, action)


@app.command("casimir")
def casimir_cmd(ctx: typer.Context, tensor: str, function: str):
    """Verify that a function is a Casimir of a tensor."""

    def action(state: CliState) -> int:
        context = state.context()
        verdict = is_casimir(context.tensor(tensor), context.expression(function), state.tester)
        return _verdict_result(state, "casimir", verdict, f"{function} is a Casimir of {tensor}")

    _run(ctx, action)


@app.command("push")
def push_cmd(ctx: typer.Context, tensor: str, map_name: str = typer.Argument(..., metavar="MAP")):
    """Push a tensor forward along a linear coordinate change."""

    def action(state: CliState) -> int:
        context = state.context()
        pushed = pushforward_poisson(context.tensor(tensor), context.linear_map(map_name), state.tester)
        if not state.json_output:
            report.echo(report.format_matrix(pushed.bivector))
        return _verdict_result(state, "push", pushed.jacobi, f"Jacobi after {map_name}")

    _run(ctx, action)


@app.command("constants")
def constants_cmd(
    ctx: typer.Context,
    tensor: str,
    map_name: Optional[str] = typer.Option(None, "--map", help="Apply a linear map first"),
):
    """Structure constants of a linear Poisson tensor."""

    def action(state: CliState) -> int:
        context = state.context()
        target = context.tensor(tensor)
        if map_name:
            target = pushforward_poisson(target, context.linear_map(map_name), state.tester)
        constants = structure_constants(target)
        if state.json_output:
            report.emit_json({"operation": "constants", "table": constants.to_table()})
        else:
            report.echo(constants.to_text())
        return EXIT_OK

    _run(ctx, action)


@dataclass
class Check:
    """One line of an expectation report"""

    text: str
    ok: bool
    verdict: Optional[Verdict] = None
    details: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"check": self.text, "ok": self.ok}
        if self.verdict is not None:
            data["verdict"] = self.verdict.to_dict()
        if self.details:
            data["details"] = self.details
        return data


@dataclass
class TargetReport:
    """Checks of one expectation block"""

    target: str
    tensor: PoissonTensor
    hypotheses: List[Check] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "chart": list(self.tensor.chart.names),
            "ok": self.ok,
            "jacobi": self.tensor.jacobi.to_dict(),
            "hypotheses": [check.to_dict() for check in self.hypotheses],
            "checks": [check.to_dict() for check in self.checks],
            "tensor": self.tensor.bivector.to_dict(),
        }


def _outcome(text: str, verified: bool, verdict: Verdict, verbose: bool) -> str:
    line = f"{text} — {'verified' if verified else 'FAILED'}"
    return f"{line} ({verdict})" if verbose else line


def _check_algebra(state: CliState, context: ProblemContext, tensor: PoissonTensor, expectation: Expectation) -> Check:
    algebra = expectation.algebra
    table = state.service.algebra(algebra.name)
    target = tensor
    if algebra.map:
        target = pushforward_poisson(tensor, context.linear_map(algebra.map), state.tester)
    constants: StructureConstants = structure_constants(target)
    matched = match_table(constants, table.brackets)
    if matched:
        return Check(f"Algebra {algebra.name}: match", matched == algebra.matches)
    mismatches = table_mismatches(constants, table.brackets)
    return Check(f"Algebra {algebra.name}: MISMATCH", matched == algebra.matches, details=mismatches)


def run_expectations(state: CliState, context: ProblemContext) -> List[TargetReport]:
    """Check every expectation block of a document"""
    reports: List[TargetReport] = []
    for expectation in context.document.expect:
        name = expectation.target
        tensor = context.tensor(name)
        result = TargetReport(name, tensor)
        if name in context.document.deformations:
            for hypothesis in context.deformation(name).hypotheses:
                result.hypotheses.append(Check(f"hypothesis {hypothesis}", hypothesis.holds, hypothesis.verdict))
        if expectation.jacobi is None:
            jacobi_ok = tensor.jacobi.holds
        else:
            jacobi_ok = tensor.jacobi.kind == expectation.jacobi
        jacobi = Check(f"Jacobi: {tensor.jacobi}", jacobi_ok, tensor.jacobi)
        if not jacobi_ok and expectation.jacobi is not None:
            jacobi.details.append(f"expected {expectation.jacobi.value}")
        result.checks.append(jacobi)
        if expectation.matrix is not None:
            expected = context.bivector_entries(tensor.chart, expectation.matrix)
            differences = report.compare_entries(expected, report.matrix_entries(tensor.bivector))
            text = "Matrix: matches" if not differences else "Matrix: differs"
            result.checks.append(Check(text, not differences, details=differences))
        if expectation.casimirs:
            verdict = worst(is_casimir(tensor, context.expression(c), state.tester) for c in expectation.casimirs)
            shown = ", ".join(to_text(context.expression(c)) for c in expectation.casimirs)
            text = _outcome(f"Casimirs: {shown}", verdict.holds, verdict, state.verbose)
            result.checks.append(Check(text, verdict.holds, verdict))
        for c in expectation.non_casimirs:
            verdict = is_casimir(tensor, context.expression(c), state.tester)
            text = _outcome(f"Not a Casimir: {c}", not verdict.holds, verdict, state.verbose)
            result.checks.append(Check(text, not verdict.holds, verdict))
        if expectation.algebra is not None:
            result.checks.append(_check_algebra(state, context, tensor, expectation))
        reports.append(result)
    return reports


def _expectation_result(state: CliState, operation: str, document: ProblemDocument, reports: List[TargetReport]) -> int:
    ok = all(r.ok for r in reports)
    if state.json_output:
        jacobi = worst(r.tensor.jacobi for r in reports)
        report.emit_json(
            {
                "operation": operation,
                "document": document.name,
                "ok": ok,
                "verdict": jacobi.kind.value,
                "targets": [r.to_dict() for r in reports],
            }
        )
        return EXIT_OK if ok else EXIT_NONZERO
    if operation == "example":
        report.echo(f"# {document.name}: {document.description}".rstrip(": "))
    for result in reports:
        report.echo(f"== {result.target} on {result.tensor.chart}")
        for check in result.hypotheses:
            report.flag(check.text, check.ok)
        report.echo(report.format_matrix(result.tensor.bivector))
        for check in result.checks:
            report.flag(check.text, check.ok)
            for line in check.details:
                report.echo(f"  {line}")
    return EXIT_OK if ok else EXIT_NONZERO


@app.command("verify")
def verify_cmd(ctx: typer.Context):
    """Check every expectation block of the problem document."""

    def action(state: CliState) -> int:
        context = state.context()
        return _expectation_result(state, "verify", context.document, run_expectations(state, context))

    _run(ctx, action)


@app.command("example")
def example_cmd(ctx: typer.Context, number: int = typer.Argument(..., min=0, max=5)):
    """Run a bundled worked example (0 is the base lift)."""

    def action(state: CliState) -> int:
        document: ProblemDocument = state.service.load_example(number)
        context = ProblemContext(document, state.tester, state.debug_force)
        return _expectation_result(state, "example", document, run_expectations(state, context))

    _run(ctx, action)


if __name__ == "__main__":
    app()
