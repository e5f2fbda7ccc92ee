"""The command line interface of latcom."""

import csv
import io
import sys
import typing as t
from functools import wraps

import click
from tabulate import tabulate

from . import __version__ as package_version
from .click_utils import RANGE, RATIONAL, SPEC
from .degrees import DegreeReport, degree_report
from .density import (
    DensityPlan,
    convergence_table,
    one_target_plan,
    verify_smallest_instance,
    zero_target_sequence,
)
from .debug_info import info
from .errors import (
    ArgumentDomain,
    GroupTableError,
    InvalidSpec,
    JobCapExceeded,
    OrderCapExceeded,
    SpecParseError,
    UnknownSuite,
)
from .families import FamilySpec, build
from .group import DEFAULT_ORDER_CAP, ExactRational, format_cayley_table, read_cayley_table
from .json_utils import SCHEMA_VERSION, csv_cell, dumps, lattice_to_dict, rational, rational_text, report_to_dict
from .lattice import all_subgroups
from .scanner import DEFAULT_JOB_CAP, FORMATS, OUTPUTS, ParameterRange, Scanner
from .verify import DEFAULT_MEMBERSHIP_BOUND, SUITES, Verifier


_header: str = f"latcom version {package_version}: subgroup commutativity degrees of finite groups"

EXIT_FAILURE: int = 1
EXIT_USAGE: int = 2
EXIT_CAP: int = 3

F = t.TypeVar("F", bound=t.Callable[..., t.Any])


def _exit_code(err: Exception) -> int:
    if isinstance(err, (OrderCapExceeded, JobCapExceeded)):
        return EXIT_CAP
    if isinstance(err, (SpecParseError, InvalidSpec, GroupTableError, UnknownSuite, ArgumentDomain)):
        return EXIT_USAGE
    return EXIT_FAILURE


def handle_errors(command: F) -> F:
    """Map exceptions to exit codes; ``--debug`` re-raises them instead."""

    @wraps(command)
    def wrapper(*args: t.Any, **kwargs: t.Any) -> t.Any:
        debug = bool((click.get_current_context().find_root().obj or {}).get("debug"))
        try:
            return command(*args, **kwargs)
        except KeyboardInterrupt:
            if debug:
                raise
            click.echo("\nProcess interrupted. Exiting...", err=True)
            sys.exit(EXIT_FAILURE)
        except Exception as err:  # pylint: disable=W0703
            if debug:
                raise
            click.echo(err, err=True)
            sys.exit(_exit_code(err))

    return t.cast(F, wrapper)


def _report_table(report: DegreeReport) -> str:
    rows = [
        ["group", report.label],
        ["order", report.order],
        ["|L(G)|", report.lattice_size],
        ["|N(G)|", report.normal_count],
        ["gamma", report.gamma],
        ["sd", rational_text(report.sd)],
        ["Im f", " ".join(rational_text(v) for v in report.f_image)],
        ["|Im f|", report.imf_size],
        ["Iwasawa", report.iwasawa],
        ["in class C", report.in_class_C],
        ["criterion lhs", rational_text(report.criterion31.lhs)],
        ["criterion rhs", rational_text(report.criterion31.rhs)],
        ["criterion fires", report.criterion31.fires],
    ]
    return tabulate(rows, tablefmt="github")


def _emit_report(report: DegreeReport, fmt: str) -> None:
    click.echo(_report_table(report) if fmt == "table" else dumps(report_to_dict(report)))


@click.group(
    name="latcom",
    help=_header,
    no_args_is_help=True,
    epilog="Rationals are printed exactly as num/den; approx fields are advisory only.",
)
@click.option(
    "--order-cap",
    type=click.IntRange(min=1),
    default=DEFAULT_ORDER_CAP,
    show_default=True,
    envvar="LATCOM_ORDER_CAP",
    help="Refuse to build groups above this order.",
)
@click.option("-l", "--log-file", type=click.Path(), help="Log file")
@click.option("-q", "--quiet", is_flag=True, help="Quiet. Display only errors.")
@click.option("--debug", is_flag=True, help="Debug mode. Will throw exceptions.")
@click.version_option(
    version=package_version, message=tabulate(info(), headers=["software", "version"], tablefmt="github")
)
@click.pass_context
def cli(ctx: click.Context, order_cap: int, log_file: t.Optional[str], quiet: bool, debug: bool) -> None:
    """latcom command group."""
    ctx.ensure_object(dict)
    ctx.obj.update(order_cap=order_cap, log_file=log_file, quiet=quiet, debug=debug)


@cli.command()
@click.argument("spec", type=SPEC)
@click.option("--full-f-check", is_flag=True, help="Evaluate f on every subgroup, not one per conjugacy class.")
@click.option("-F", "--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@click.pass_obj
@handle_errors
def report(obj: t.Dict[str, t.Any], spec: FamilySpec, full_f_check: bool, fmt: str) -> None:
    """Print the degree report of SPEC, e.g. D(6) or prod(D(6),Z(5))."""
    G = build(spec, obj["order_cap"])
    _emit_report(degree_report(G, full=full_f_check, order_cap=obj["order_cap"]), fmt)


@cli.command()
@click.argument("spec", type=SPEC)
@click.pass_obj
@handle_errors
def lattice(obj: t.Dict[str, t.Any], spec: FamilySpec) -> None:
    """Dump every subgroup of SPEC as JSON."""
    G = build(spec, obj["order_cap"])
    click.echo(dumps(lattice_to_dict(all_subgroups(G, obj["order_cap"]))))


@cli.command()
@click.argument("spec", type=SPEC)
@click.pass_obj
@handle_errors
def table(obj: t.Dict[str, t.Any], spec: FamilySpec) -> None:
    """Print the Cayley table of SPEC in the format read by ``latcom import``."""
    click.echo(format_cayley_table(build(spec, obj["order_cap"])))


@cli.command(name="import")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--full-f-check", is_flag=True, help="Evaluate f on every subgroup, not one per conjugacy class.")
@click.option("-F", "--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@click.pass_obj
@handle_errors
def import_table(obj: t.Dict[str, t.Any], path: str, full_f_check: bool, fmt: str) -> None:
    """Validate the Cayley table in PATH and print its degree report."""
    G = read_cayley_table(path, obj["order_cap"])
    _emit_report(degree_report(G, full=full_f_check, order_cap=obj["order_cap"]), fmt)


@cli.command()
@click.argument("suite", default="all")
@click.option("--full-f-check", is_flag=True, help="Evaluate f on every subgroup, not one per conjugacy class.")
@click.option(
    "--membership-bound",
    type=click.IntRange(min=1, max=10**6),
    default=DEFAULT_MEMBERSHIP_BOUND,
    show_default=True,
    help="Upper bound of the dihedral membership scan.",
)
@click.option("-F", "--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@click.pass_obj
@handle_errors
def verify(obj: t.Dict[str, t.Any], suite: str, full_f_check: bool, membership_bound: int, fmt: str) -> None:
    """Run a verification SUITE, or all of them."""
    if suite != "all" and suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)} or all")
    results = Verifier(
        order_cap=obj["order_cap"],
        full_f_check=full_f_check,
        membership_bound=membership_bound,
        quiet=obj["quiet"],
        log_file=obj["log_file"],
    ).run(suite)
    passed = all(result.passed for result in results)
    if fmt == "table":
        rows = [[r.suite, len(r.cases), len(r.failures), "pass" if r.passed else "FAIL"] for r in results]
        click.echo(tabulate(rows, headers=["suite", "cases", "failed", "result"], tablefmt="github"))
    else:
        document = {"schema": SCHEMA_VERSION, "passed": passed, "suites": [result.to_dict() for result in results]}
        click.echo(dumps(document))
    if not passed:
        sys.exit(EXIT_FAILURE)


@cli.command()
@click.argument("template")
@click.option("-r", "--range", "ranges", type=RANGE, multiple=True, help="Variable range, e.g. n=2..50 or q=5,7,11.")
@click.option(
    "-o",
    "--output",
    "outputs",
    type=click.Choice(list(OUTPUTS)),
    multiple=True,
    help="Report field to emit; repeat for several. Defaults to sd, imf, gamma and criterion31.",
)
@click.option("-F", "--format", "fmt", type=click.Choice(list(FORMATS)), default="json", show_default=True)
@click.option("--cache", type=click.Path(dir_okay=False), envvar="LATCOM_CACHE", help="JSON-lines result cache.")
@click.option("-j", "--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
@click.option("--job-cap", type=click.IntRange(min=1), default=DEFAULT_JOB_CAP, show_default=True)
@click.option("--full-f-check", is_flag=True, help="Evaluate f on every subgroup, not one per conjugacy class.")
@click.option("--audit", type=click.IntRange(min=0), default=0, help="Recompute this many cached records first.")
@click.pass_obj
@handle_errors
def scan(
    obj: t.Dict[str, t.Any],
    template: str,
    ranges: t.Tuple[ParameterRange, ...],
    outputs: t.Tuple[str, ...],
    fmt: str,
    cache: t.Optional[str],
    jobs: int,
    job_cap: int,
    full_f_check: bool,
    audit: int,
) -> None:
    """Report on every group of TEMPLATE over the given ranges, e.g. 'D(2n)' -r n=2..50."""
    scanner = Scanner(
        order_cap=obj["order_cap"],
        full_f_check=full_f_check,
        outputs=outputs or None,
        cache=cache,
        jobs=jobs,
        job_cap=job_cap,
        quiet=obj["quiet"],
        log_file=obj["log_file"],
    )
    if audit and cache:
        mismatches = scanner.audit(cache, audit)
        if mismatches:
            click.echo(f"cached records differ from fresh computation: {', '.join(mismatches)}", err=True)
            sys.exit(EXIT_FAILURE)
    click.echo(scanner.run(scanner.job(template, ranges, fmt)).render())


def _plan_row(step: int, plan: DensityPlan) -> t.Dict[str, t.Any]:
    return {
        "step": step,
        "min_p": plan.min_p,
        "factors": [{"q": f.q, "n": f.n, "p": f.p, "value": rational(f.value)} for f in plan.factors],
        "achieved": rational(plan.achieved),
        "error": rational(plan.error),
    }


@cli.command()
@click.option("-t", "--target", type=RATIONAL, required=True, help="Target a/b in [0, 1].")
@click.option(
    "-s",
    "--steps",
    type=click.IntRange(min=1),
    default=None,
    help="Number of rows [default: 5]. With --tolerance, the most rows to try.",
)
@click.option(
    "--start-p", type=click.IntRange(min=2), default=3, show_default=True, help="Smallest p of the first row."
)
@click.option(
    "--tolerance",
    type=RATIONAL,
    default=None,
    help="Add rows until the error is below this; exit 1 if --steps runs out first.",
)
@click.option("--verify-instance", is_flag=True, help="Brute-force the first row's factors and product.")
@click.option("-F", "--format", "fmt", type=click.Choice(["csv", "json", "table"]), default="csv", show_default=True)
@click.pass_obj
@handle_errors
def density(
    obj: t.Dict[str, t.Any],
    target: ExactRational,
    steps: t.Optional[int],
    start_p: int,
    tolerance: t.Optional[ExactRational],
    verify_instance: bool,
    fmt: str,
) -> None:
    """Groups whose relative degrees approach TARGET, one row per step."""
    if not 0 <= target <= 1:
        raise ArgumentDomain(f"target {target} is outside [0, 1]")
    if target == 0:
        headers = ["order", "sd"]
        sequence = zero_target_sequence(steps, tolerance=tolerance)
        final_error = sequence[-1][1]
        body = [[order, rational_text(value)] for order, value in sequence]
        document: t.Dict[str, t.Any] = {
            "schema": SCHEMA_VERSION,
            "target": rational(target),
            "rows": [{"order": order, "sd": rational(value)} for order, value in sequence],
        }
    else:
        plans = (
            [one_target_plan()]
            if target == 1
            else convergence_table(target.numerator, target.denominator, steps, start_p, tolerance)
        )
        final_error = plans[-1].error
        rows = [_plan_row(step, plan) for step, plan in enumerate(plans, start=1)]
        headers = ["step", "min_p", "primes", "achieved", "error"]
        body = [
            [row["step"], row["min_p"], " ".join(str(f["p"]) for f in row["factors"]), row["achieved"], row["error"]]
            for row in rows
        ]
        body = [[csv_cell(cell) for cell in line] for line in body]
        document = {"schema": SCHEMA_VERSION, "target": rational(target), "rows": rows}
        if verify_instance and plans[0].factors:
            instance = verify_smallest_instance(plans[0], obj["order_cap"])
            document["instance"] = {
                "status": instance.status,
                "product_order": instance.product_order,
                "product_value": rational(instance.product_value) if instance.product_value is not None else None,
            }
            if not instance.ok:
                click.echo(dumps(document))
                sys.exit(EXIT_FAILURE)

    if fmt == "json":
        click.echo(dumps(document))
    elif fmt == "table":
        click.echo(tabulate(body, headers=headers, tablefmt="github"))
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(body)
        click.echo(buffer.getvalue().rstrip("\n"))
    if tolerance is not None and final_error >= tolerance:
        click.echo(f"error {final_error} is not below the tolerance {tolerance} after {steps} rows", err=True)
        sys.exit(EXIT_FAILURE)
