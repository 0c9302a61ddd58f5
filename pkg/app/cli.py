"""
Command-line surface: invariants, obstruct, verify and table.

Reports go to stdout as sorted, indented JSON (or plain text with --text);
errors go to stderr as one line and map to the exit code of their class.
"""
import asyncio
import dataclasses
import functools
import json
import logging
from typing import Any, Callable, List, Optional, Sequence

import click
from pydantic import BaseModel

from app import __version__
from app.core.exceptions import DomainError, InternalConsistencyError, ResourceCapExceeded, VerificationFailed
from app.main import configure_logging
from app.schemas.reports import InvariantsReport, ObstructionReport, SuiteReport, TableEntry
from app.services.knot_service import MOVE_CHOICES, get_knot_service
from app.services.verification_service import SUITES, get_verification_service

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class CliOptions:
    kmax: Optional[int]
    crossing_cap: Optional[int]
    as_json: bool


def _dump(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        data = payload.model_dump(mode="json", by_alias=True)
    else:
        data = [item.model_dump(mode="json", by_alias=True) for item in payload]
    return json.dumps(data, sort_keys=True, indent=2)


def _emit(options: CliOptions, payload: Any, text: Callable[[], str]) -> None:
    click.echo(_dump(payload) if options.as_json else text())


def handle_errors(command: Callable) -> Callable:
    """Map the error hierarchy onto exit codes with a one-line stderr message"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (DomainError, ResourceCapExceeded, InternalConsistencyError, VerificationFailed) as e:
            logger.debug(f"{type(e).__name__} -> exit code {e.exit_code}")
            click.echo(f"error: {e}", err=True)
            raise SystemExit(e.exit_code)

    return wrapper


# Text renderers

def _invariants_text(report: InvariantsReport) -> str:
    lines = [
        f"braid: {report.braid or '(empty)'} on {report.strands} strands, {report.components} component(s)",
        f"P = {report.homfly_text}",
        f"Conway = {report.conway_text}",
        f"z-degree {report.profile.z_degree}, a-span {report.profile.a_span} "
        f"(a^{report.profile.a_min} .. a^{report.profile.a_max})",
    ]
    if report.fwm_bounds is not None:
        lines.append(
            f"crossing number >= {report.fwm_bounds.crossing_lb}, braid index >= {report.fwm_bounds.braid_index_lb}"
        )
    if report.self_check is not None:
        lines.append(f"P(a, a^-1 - a) = 1: {'ok' if report.self_check else 'FAILED'}")
    return "\n".join(lines)


def _obstruction_text(reports: Sequence[ObstructionReport]) -> str:
    lines = []
    for report in reports:
        lines.append(f"{report.family.value}-moves on {report.knot}, k in {report.k_min}..{report.k_max}")
        for v in report.verdicts:
            state = "obstructed" if v.obstructed else "open"
            columns = " ".join(f"F_{c.p}:{'obstructed' if c.obstructed else 'open'}" for c in v.modp)
            lines.append(f"  k={v.k:<3} {state:<11} [{v.test}]" + (f"  {columns}" if columns else ""))
        lines.append(f"  candidates: {report.candidates()}")
        for bound in report.bounds.values():
            if bound.applicable:
                lines.append(f"  {bound.name}: {bound.count} <= {bound.bound} {'holds' if bound.holds else 'FAILS'}")
            else:
                lines.append(f"  {bound.name}: inapplicable")
    lines.append(reports[0].note if reports else "")
    return "\n".join(lines)


def _suite_text(report: SuiteReport) -> str:
    lines = [f"suite {report.suite}: {'pass' if report.passed else 'FAIL'}"]
    for check in report.checks:
        line = f"  {'PASS' if check.passed else 'FAIL'} {check.name}"
        if check.detail:
            line += f": {check.detail}"
        lines.append(line)
    return "\n".join(lines)


def _table_text(entries: List[TableEntry]) -> str:
    lines = []
    for entry in entries:
        r = entry.record
        lines.append(
            f"{r.name:<6} c={r.crossing_number} (>= {entry.fwm_bounds.crossing_lb}) "
            f"b={r.braid_index} (>= {entry.fwm_bounds.braid_index_lb}) "
            f"{'fibred ' if entry.fibred else ''}P = {entry.homfly_text}"
        )
    return "\n".join(lines)


def _k_max(options: CliOptions, kmax: Optional[int]) -> Optional[int]:
    """Subcommand --kmax, else the global one, else None for the service default"""
    k_max = kmax if kmax is not None else options.kmax
    if k_max is not None and k_max < 2:
        raise DomainError(f"kmax must be at least 2, got {k_max}")
    return k_max


def _crossing_cap(options: CliOptions) -> Optional[int]:
    if options.crossing_cap is not None and options.crossing_cap < 0:
        raise DomainError(f"crossing cap must be nonnegative, got {options.crossing_cap}")
    return options.crossing_cap


class EngineGroup(click.Group):
    """Command group whose usage errors exit with the domain-error code"""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = DomainError.exit_code
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = DomainError.exit_code
            raise


@click.group(cls=EngineGroup)
@click.version_option(__version__)
@click.option("--kmax", type=int, default=None, help="Largest twist parameter k, at least 2 (default KMAX).")
@click.option("--crossing-cap", type=int, default=None, help="Largest diagram the skein engine accepts.")
@click.option("--json/--text", "as_json", default=True, help="Report format on stdout.")
@click.option("-v", "--verbose", count=True, help="Log to stderr (-v info, -vv debug).")
@click.pass_context
def cli(ctx: click.Context, kmax: Optional[int], crossing_cap: Optional[int], as_json: bool, verbose: int):
    """Exact HOMFLY/Conway invariants and twist-move obstructions for braid closures"""
    configure_logging(verbose)
    ctx.obj = CliOptions(kmax=kmax, crossing_cap=crossing_cap, as_json=as_json)


@cli.command()
@click.option("--braid", "braid_text", required=True, help='Braid word, e.g. "1 -2 1 -2" or "3:1 1".')
@click.option("--allow-links", is_flag=True, help="Accept closures with several components.")
@click.pass_obj
@handle_errors
def invariants(options: CliOptions, braid_text: str, allow_links: bool):
    """HOMFLY and Conway polynomials, degree profile and FWM bounds"""
    report = get_knot_service().invariants(braid_text, allow_links=allow_links, crossing_cap=_crossing_cap(options))
    _emit(options, report, lambda: _invariants_text(report))


@cli.command()
@click.option("--braid", "braid_text", required=True, help="Braid word of a knot.")
@click.option("--moves", default="both", show_default=True, help=f"One of {', '.join(MOVE_CHOICES)}.")
@click.option("--kmax", type=int, default=None, help="Overrides the global --kmax.")
@click.option("--modp", is_flag=True, help="Add finite-field columns for k >= 3.")
@click.option("--name", default=None, help="Knot label in the report (default: the braid word).")
@click.pass_obj
@handle_errors
def obstruct(options: CliOptions, braid_text: str, moves: str, kmax: Optional[int], modp: bool, name: Optional[str]):
    """Per-k verdicts for t_2k- and tbar_2k-moves"""
    reports = get_knot_service().obstruct(
        braid_text,
        moves=moves,
        k_max=_k_max(options, kmax),
        modp=modp,
        name=name,
        crossing_cap=_crossing_cap(options),
    )
    payload = reports[0] if len(reports) == 1 else reports
    _emit(options, payload, lambda: _obstruction_text(reports))


@cli.command()
@click.option("--suite", required=True, help=f"One of {', '.join(SUITES)}.")
@click.option("--nmax", type=int, default=8, show_default=True, help="Largest family index (prop6).")
@click.option("--kmax", type=int, default=None, help="Overrides the global --kmax.")
@click.pass_obj
@handle_errors
def verify(options: CliOptions, suite: str, nmax: int, kmax: Optional[int]):
    """Run a self-verification suite; exit code 2 when any check fails"""
    if nmax < 1:
        raise DomainError(f"nmax must be at least 1, got {nmax}")
    k_max = _k_max(options, kmax)
    report = asyncio.run(get_verification_service().run_suite(suite, n_max=nmax, k_max=k_max))
    _emit(options, report, lambda: _suite_text(report))
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise VerificationFailed(f"suite {suite} failed: {', '.join(failed)}")


@cli.command()
@click.option("--path", default=None, help="JSON-lines table (default: bundled).")
@click.pass_obj
@handle_errors
def table(options: CliOptions, path: Optional[str]):
    """Load a knot table through the ingestion gates and list it"""
    entries = get_knot_service().table(path, crossing_cap=_crossing_cap(options))
    _emit(options, entries, lambda: _table_text(entries))
