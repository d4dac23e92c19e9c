"""
itfkit command line
Validate platform models, enumerate paths and scenarios, check capacity,
generate accelerator fragments and write reports.

Exit codes: 0 ok, 1 usage or parse failure, 2 analysis findings of severity error.
"""

import json
import logging
import sys

import click

from config import Config
from models.diagnostics import PmlError
from pml_dsl import load_platform, parse
from services.analysis_service import TEMPLATE_CASES, AnalysisService
from services.interference_service import validate_symmetry
from services.template_service import check_unitary
from services.transaction_service import resolve_transactions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FINDINGS = 2

# errors that describe the model under analysis rather than the invocation
ANALYSIS_ERRORS = {'E_UNVALIDATED_SYMMETRY', 'E_NOT_SYMMETRIC', 'E_OVERFLOW', 'E_UNITARY_VIOLATION'}


class ItfkitGroup(click.Group):
    """Command group mapping every click error to the usage exit code"""

    def main(self, *args, **kwargs):
        kwargs.pop('standalone_mode', None)
        try:
            return super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo('Aborted!', err=True)
            sys.exit(EXIT_USAGE)


def _fail(e: PmlError):
    for diagnostic in e.diagnostics:
        click.echo(str(diagnostic), err=True)
    sys.exit(EXIT_FINDINGS if e.code in ANALYSIS_ERRORS else EXIT_USAGE)


def _load(path: str):
    try:
        return load_platform(path)
    except PmlError as e:
        _fail(e)


def _echo_rejected(result):
    for diagnostic in result['diagnostics']:
        click.echo(f"{diagnostic['code']}: {diagnostic['message']}", err=True)


def _write_json(data, out: str):
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'
    with open(out, 'w', encoding='utf-8') as f:
        f.write(text)
    click.echo(f"Wrote {out}")


model_file = click.argument('file', type=click.Path(exists=True, dir_okay=False))


@click.group(cls=ItfkitGroup)
@click.option('--log-level', default=Config.LOG_LEVEL, show_default=True, help='Logging level')
def cli(log_level):
    """Platform modeling and interference analysis toolkit"""
    logging.basicConfig(level=log_level.upper())


@cli.command()
@model_file
def validate(file):
    """Parse a model and check its transactions and symmetry classes"""
    with open(file, 'r', encoding='utf-8') as f:
        result = parse(f.read(), file)
    for diagnostic in result.diagnostics:
        click.echo(str(diagnostic))
    if not result.ok:
        sys.exit(EXIT_USAGE)

    platform = result.platform
    diagnostics = resolve_transactions(platform).diagnostics
    for symmetry in platform.symmetries:
        diagnostics.extend(validate_symmetry(platform, symmetry))
    diagnostics.extend(check_unitary(platform))
    for diagnostic in diagnostics:
        click.echo(str(diagnostic))

    flat = platform.flat
    click.echo(
        f"{platform.name}: {len(flat.initiators)} initiators, {len(flat.targets)} targets, "
        f"{len(flat.transporters)} transporters, {len(flat.links)} links, {len(flat.transactions())} transactions"
    )
    sys.exit(EXIT_FINDINGS if any(d.is_error for d in diagnostics) else EXIT_OK)


@cli.command()
@model_file
@click.option('--from', 'src', required=True, help='Initiator id')
@click.option('--to', 'dst', required=True, help='Target id')
def paths(file, src, dst):
    """List every simple route from an initiator to a target"""
    platform = _load(file)
    try:
        result = AnalysisService().paths(platform, src, dst)
    except PmlError as e:
        _fail(e)
    for path in result['paths']:
        click.echo(' -> '.join(path))
    click.echo(f"{result['count']} path(s)")


@cli.command()
@model_file
@click.option('--n', 'n', default=Config.DEFAULT_SCENARIO_SIZE, show_default=True, type=int, help='Scenario size')
@click.option('--include-same-app', is_flag=True, help='Keep scenarios with two transactions of one application')
@click.option('--no-quotient', is_flag=True, help='Do not group symmetric scenarios')
@click.option('--json', 'json_out', type=click.Path(dir_okay=False), help='Write the result as JSON')
def interfere(file, n, include_same_app, no_quotient, json_out):
    """Enumerate and classify concurrent-transaction scenarios"""
    platform = _load(file)
    try:
        result = AnalysisService().interfere(
            platform, n, same_app_exclusion=not include_same_app, use_quotient=not no_quotient
        )
    except PmlError as e:
        _fail(e)

    for entry in result['scenarios']:
        channel = ','.join(entry['channel']) or '-'
        click.echo(
            f"{entry['kind']:8} {' | '.join(entry['transactions'])}  channel={channel}  x{entry['orbit_size']}"
        )
    _echo_rejected(result)
    click.echo(f"{result['scenario_count']} scenario(s), {len(result['scenarios'])} listed")
    if json_out:
        _write_json(result, json_out)
    sys.exit(EXIT_FINDINGS if result['has_errors'] else EXIT_OK)


@cli.command()
@model_file
@click.option('--json', 'json_out', type=click.Path(dir_okay=False), help='Write the result as JSON')
def capacity(file, json_out):
    """Average-demand check of every traversed component"""
    platform = _load(file)
    try:
        result = AnalysisService().capacity(platform)
    except PmlError as e:
        _fail(e)

    for entry in result['entries']:
        declared = 'n/a' if entry['capacity'] is None else f"{entry['capacity']} Bps"
        click.echo(f"{entry['component']:24} {entry['bytes_per_second']:>14} B/s  {declared:>16}  {entry['verdict']}")
    _echo_rejected(result)
    if json_out:
        _write_json(result, json_out)
    sys.exit(EXIT_FINDINGS if result['has_errors'] else EXIT_OK)


@cli.command()
@click.option('--case', 'case', required=True, type=click.Choice(list(TEMPLATE_CASES)), help='Coupling case')
@click.option('--parallel', type=int, default=None, help='Number of parallel initiators (k >= 2)')
@click.option('--symmetric', is_flag=True, help='Declare the parallel initiators interchangeable')
@click.option('--name', required=True, help='Accelerator id')
@click.option('--attach', default=None, help='Host transporter the accelerator is attached to')
@click.option('--targets', default='', help='Comma separated shared host targets')
@click.option('--controller', default=None, help='Host initiator configuring the accelerator')
@click.option('--config', 'config_services', default='', help='Comma separated configuration services')
@click.option('--microcontroller', is_flag=True, help='Add an on-accelerator microcontroller initiator')
def template(case, parallel, symmetric, name, attach, targets, controller, config_services, microcontroller):
    """Print the model fragment for an accelerator integration case"""
    try:
        text = AnalysisService().template(
            case=case,
            name=name,
            attach=attach,
            parallel=parallel,
            symmetric=symmetric,
            targets=[t for t in targets.split(',') if t],
            controller=controller,
            config_services=[s for s in config_services.split(',') if s],
            microcontroller=microcontroller
        )
    except PmlError as e:
        _fail(e)
    click.echo(text, nl=False)


@cli.command('export-dot')
@model_file
@click.option('--highlight', default=None, help='Finding id whose components are highlighted')
def export_dot(file, highlight):
    """Print the platform as a DOT digraph"""
    platform = _load(file)
    try:
        click.echo(AnalysisService().dot(platform, highlight))
    except PmlError as e:
        _fail(e)


@cli.command()
@model_file
@click.option('--json', 'json_out', type=click.Path(dir_okay=False), help='Report destination (stdout when omitted)')
@click.option('--n', 'n_max', default=Config.DEFAULT_SCENARIO_SIZE, show_default=True, type=int, help='Largest scenario size')
@click.option('--include-same-app', is_flag=True, help='Keep scenarios with two transactions of one application')
@click.option('--no-quotient', is_flag=True, help='Do not group symmetric scenarios')
def report(file, json_out, n_max, include_same_app, no_quotient):
    """Write the full findings report"""
    platform = _load(file)
    try:
        result = AnalysisService().report(
            platform, n_max, same_app_exclusion=not include_same_app, use_quotient=not no_quotient
        )
    except PmlError as e:
        _fail(e)

    if json_out:
        with open(json_out, 'w', encoding='utf-8') as f:
            f.write(result.to_json())
        errors = sum(1 for finding in result.findings if finding.is_error)
        click.echo(f"Wrote {json_out}: {len(result.findings)} findings, {errors} error(s)")
    else:
        click.echo(result.to_json(), nl=False)
    sys.exit(EXIT_FINDINGS if result.has_errors else EXIT_OK)


if __name__ == '__main__':
    cli()
