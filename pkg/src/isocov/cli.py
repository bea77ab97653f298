"""Command-line entry point.

Exit codes: 0 success, 2 validation error, 3 parse error, 4 internal
invariant violation.

Default aggregation rules for ``paths`` when a topology file names no rule
for a metric: delay / E2ED / jitter -> sum, hop count -> edge count,
data rate -> mean, packet loss -> sum capped at 100, throughput -> min.
"""

from __future__ import annotations

import contextlib
import sys
from pathlib import Path

import click

from . import io as rio
from .engine import InvariantError, rank_isocov, satisfaction_matrix
from .model import IsocovError, ValidationError, resolve
from .topology import RouteLimitExceeded, build_problem, enumerate_routes, route_label
from .topsis import rank_topsis

EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_INTERNAL = 4

_file = click.Path(exists=False, dir_okay=False, path_type=Path)


@contextlib.contextmanager
def _exit_codes():
    try:
        yield
    except rio.ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except ValidationError as exc:
        click.echo("validation error:", err=True)
        if exc.issues:
            for issue in exc.issues:
                click.echo(f"  {issue}", err=True)
        else:
            click.echo(f"  {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except RouteLimitExceeded as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except (InvariantError, AssertionError) as exc:
        click.echo(f"internal invariant violated: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)
    except IsocovError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _format_options(f):
    f = click.option("--precision", default=rio.DEFAULT_PRECISION, show_default=True, type=click.IntRange(0, 17), help="Decimal places for csv/table output.")(f)
    f = click.option("--format", "fmt", type=click.Choice(rio.FORMATS), default="table", show_default=True)(f)
    return f


def _problem_options(f):
    f = click.option("--criteria", "criteria_path", required=True, type=_file, help="Criteria JSON file.")(f)
    f = click.option("--matrix", "matrix_path", required=True, type=_file, help="Ratings CSV file.")(f)
    return f


def _rank(problem, method: str, clamp_bounds: bool):
    if method == "topsis":
        return rank_topsis(problem)
    return rank_isocov(problem, clamp_bounds=clamp_bounds)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Rank routes on multiple QoS metrics with value constraints."""


@cli.command()
@_problem_options
@click.option("--method", type=click.Choice(["isocov", "topsis"]), default="isocov", show_default=True)
@click.option("--constraints", type=click.Choice(["hard", "soft"]), default="hard", show_default=True)
@_format_options
@click.option("--intermediates", is_flag=True, help="Also emit F/V, N, P and the ideal vectors.")
@click.option("--clamp-bounds", is_flag=True, help="Clamp constraint bounds to the data range instead of failing.")
def rank(matrix_path, criteria_path, method, constraints, fmt, precision, intermediates, clamp_bounds):
    """Score and rank every alternative."""
    with _exit_codes():
        problem = rio.load_problem(matrix_path, criteria_path, hard=constraints == "hard")
        report = _rank(problem, method, clamp_bounds)
        click.echo(rio.emit_report(report, fmt, precision, intermediates), nl=False)


@cli.command()
@_problem_options
@_format_options
@click.option("--clamp-bounds", is_flag=True)
def degrees(matrix_path, criteria_path, fmt, precision, clamp_bounds):
    """Emit the constraint-satisfaction degrees and V flags."""
    with _exit_codes():
        problem = rio.load_problem(matrix_path, criteria_path)
        F = satisfaction_matrix(problem, resolve(problem, clamp_bounds=clamp_bounds))
        click.echo(rio.emit_degrees(problem, F, fmt, precision), nl=False)


@cli.command()
@_problem_options
@_format_options
@click.option("--clamp-bounds", is_flag=True)
def compare(matrix_path, criteria_path, fmt, precision, clamp_bounds):
    """Hard-constraint, soft-constraint and unconstrained rankings side by side."""
    with _exit_codes():
        problem = rio.load_problem(matrix_path, criteria_path)
        reports = [
            rank_isocov(problem, hard=True, clamp_bounds=clamp_bounds),
            rank_isocov(problem, hard=False, clamp_bounds=clamp_bounds),
            rank_topsis(problem),
        ]
        click.echo(rio.emit_comparison(reports, fmt, precision), nl=False)


@cli.command()
@click.option("--topology", "topology_path", required=True, type=_file, help="Topology JSON file.")
@click.option("--criteria", "criteria_path", type=_file, help="Criteria JSON file; enables ranking.")
@click.option("--rank", "method", type=click.Choice(["isocov", "topsis"]), default="isocov", show_default=True)
@click.option("--constraints", type=click.Choice(["hard", "soft"]), default="hard", show_default=True)
@click.option("--max-routes", type=click.IntRange(1), default=100_000, show_default=True)
@_format_options
@click.option("--clamp-bounds", is_flag=True)
def paths(topology_path, criteria_path, method, constraints, max_routes, fmt, precision, clamp_bounds):
    """Enumerate simple source-to-destination routes, optionally ranking them."""
    with _exit_codes():
        topo = rio.load_topology(topology_path)
        if criteria_path is None:
            routes = enumerate_routes(topo, max_routes=max_routes)
            for k, route in enumerate(routes, start=1):
                click.echo(f"a{k}\t{route_label(route)}")
            return
        criteria = rio.load_criteria(criteria_path)
        problem, routes = build_problem(topo, criteria, hard=constraints == "hard", max_routes=max_routes)
        if fmt == "table":
            for alt, route in zip(problem.alternatives, routes):
                click.echo(f"{alt}\t{route_label(route)}")
            click.echo()
        report = _rank(problem, method, clamp_bounds)
        click.echo(rio.emit_report(report, fmt, precision), nl=False)


def main(argv=None):
    cli.main(args=argv, prog_name="isocov")


if __name__ == "__main__":
    main()
