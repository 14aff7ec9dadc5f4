# main.py

"""
Command-line entry point.

    python main.py equires cusp.json
    python main.py replay ex6_10

Exit codes: 0 success, 2 a condition E_j failed, 3 the algorithm could not continue,
4 bad input (malformed JSON, schema violations, unparsable polynomials).
"""

import functools
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

from equires.config import settings
from equires.exceptions import AlgorithmStuck, BadInput, EquiresError
from equires.resolution.driver import center_strings, resolve_fiber
from equires.resolution.embedded import principalize, resolve_embedded
from equires.resolution.equires import EquiresolutionRun, equiresolve
from equires.resolution.goldens import list_goldens, replay_many
from equires.schemas import BasicObjectInput, EmbeddedInput, IdTripleInput, ReportOutput

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONDITION_FAILED = 2
EXIT_STUCK = 3
EXIT_BAD_INPUT = 4


# ----------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------
def load_document(path: str, m: Optional[int]) -> Dict[str, Any]:
    """Read a JSON input document; --m overrides its truncation order."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(document, dict):
        raise BadInput(f"{path}: the document must be a JSON object")
    if m is not None:
        document["m"] = m
    return document


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info("report written to %s", out)
    else:
        click.echo(text)


def handle_errors(func):
    """Map library errors to exit codes, logging each one first."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            code = func(*args, **kwargs)
        except ValidationError as exc:
            messages = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors())
            logger.error("ValidationError: %s", messages)
            click.echo(f"error: {messages}", err=True)
            ctx.exit(EXIT_BAD_INPUT)
        except BadInput as exc:
            logger.error("BadInput: %s", exc)
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_BAD_INPUT)
        except AlgorithmStuck as exc:
            logger.error("AlgorithmStuck: %s", exc)
            for line in exc.trace:
                logger.error("  %s", line)
            click.echo(f"stuck: {exc}", err=True)
            ctx.exit(EXIT_STUCK)
        except EquiresError as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            click.echo(f"stuck: {exc}", err=True)
            ctx.exit(EXIT_STUCK)
        ctx.exit(code or EXIT_OK)

    return wrapper


def common_options(func):
    @click.option("--m", "m", type=int, default=None, help="Override the truncation order of the input.")
    @click.option("--max-dim", type=int, default=None, help="Dimension and recursion guard.")
    @click.option("--trace", type=click.Choice(["none", "steps", "full"]), default=None, help="Report detail.")
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to a file.")
    @functools.wraps(func)
    def wrapper(*args, m=None, max_dim=None, trace=None, out=None, **kwargs):
        saved = (settings.MAX_DIM, settings.TRACE)
        if max_dim is not None:
            settings.MAX_DIM = max_dim
        if trace is not None:
            settings.TRACE = trace
        try:
            return func(*args, m=m, out=out, **kwargs)
        finally:
            settings.MAX_DIM, settings.TRACE = saved

    return wrapper


def read_object(path: str, m: Optional[int]):
    return BasicObjectInput.model_validate(load_document(path, m)).to_object()


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------
@click.group()
def cli():
    """Algorithmic equiresolution of basic objects over Q[eps]/(eps^m)."""


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def sing(file, m, out):
    """Print the singular locus per chart."""
    obj = read_object(file, m)
    if obj.sing_is_empty():
        emit("Sing = ∅", out)
        return EXIT_OK
    lines = [f"{cid}: {desc}" for cid, desc in sorted(obj.singular_locus().items()) if not desc.empty]
    emit("\n".join(lines), out)
    return EXIT_OK


def _first_condition(obj):
    run = EquiresolutionRun(obj)
    if run.tree.ell == 0:
        return run, None
    return run, run.check_condition(0)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def center(file, m, out):
    """Print the algorithmic center of the first step."""
    obj = read_object(file, m)
    run, result = _first_condition(obj)
    if result is None:
        emit("Sing = ∅", out)
        return EXIT_OK
    if not result.valid:
        emit(f"E_0 fails: {result.failure.clause}: {result.failure.message}", out)
        return EXIT_CONDITION_FAILED
    emit("\n".join(f"{cid}: {text}" for cid, text in sorted(center_strings(obj, result.center).items())), out)
    return EXIT_OK


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def step(file, m, out):
    """Perform one algorithmic transform and print the transformed object."""
    obj = read_object(file, m)
    run, result = _first_condition(obj)
    if result is None:
        emit("Sing = ∅", out)
        return EXIT_OK
    if not result.valid:
        emit(f"E_0 fails: {result.failure.clause}: {result.failure.message}", out)
        return EXIT_CONDITION_FAILED
    new, _ = obj.transform_with_record(result.center, run.tree.steps[0].label, check=False)
    lines = [f"{cid}: {new.ideal(cid)}" for cid in sorted(new.chart_ids())]
    lines.append(f"b = {new.b}, E = {new.pair.labels()}")
    emit("\n".join(lines), out)
    return EXIT_OK


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def resolve(file, m, out):
    """Resolve the fiber over Q."""
    tree = resolve_fiber(read_object(file, m))
    emit(ReportOutput.from_tree("resolve", tree, settings.TRACE).to_json(), out)
    return EXIT_OK


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def equires(file, m, out):
    """Compute e(B) and the A-permissible sequence."""
    report = equiresolve(read_object(file, m))
    emit(ReportOutput.from_equires("equires", report, settings.TRACE).to_json(), out)
    return EXIT_OK if report.equisolvable else EXIT_CONDITION_FAILED


@cli.command("principalize")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def principalize_cmd(file, m, out):
    """Equiprincipalize an id-triple (W, I, E)."""
    triple = IdTripleInput.model_validate(load_document(file, m)).to_triple()
    result = principalize(triple)
    emit(ReportOutput.from_principalization(result, settings.TRACE).to_json(), out)
    return EXIT_OK if result.equiprincipalizable else EXIT_CONDITION_FAILED


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@common_options
@handle_errors
def embedded(file, m, out):
    """Embedded resolution of X = V(I) through (W, I(X), 1, E)."""
    triple = EmbeddedInput.model_validate(load_document(file, m)).to_triple()
    result = resolve_embedded(triple)
    emit(ReportOutput.from_embedded(result, settings.TRACE).to_json(), out)
    return EXIT_OK if result.resolved_over_A else EXIT_CONDITION_FAILED


@cli.command()
@click.argument("names", nargs=-1)
@click.option("--jobs", type=int, default=None, help="Replay independent examples on this many workers.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to a file.")
@handle_errors
def replay(names, jobs, out):
    """Replay named examples (see list-goldens; all of them when none is given) against their stored reports."""
    names = list(names) or list_goldens()
    results = replay_many(names, settings.JOBS if jobs is None else jobs)
    if len(results) == 1:
        emit(json.dumps(results[0].as_dict(), indent=2, sort_keys=True), out)
    else:
        emit(json.dumps([r.as_dict() for r in results], indent=2, sort_keys=True), out)
    return EXIT_OK if all(r.matches for r in results) else EXIT_CONDITION_FAILED


@cli.command("list-goldens")
def list_goldens_cmd():
    """List the replayable examples."""
    for name in list_goldens():
        click.echo(name)


if __name__ == "__main__":
    cli()
