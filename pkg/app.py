import csv
import io
import logging
import sys
from contextlib import contextmanager

import click

from data_managers import SQLiteDataManager
from database_config import create_session_factory
from elastic.estimator import clamp_and_round, estimate_cores, sanitize_measured_ce, target_ce
from elastic.errors import ElasticError
from elastic.trace import format_float, write_summary
from models import ClampPolicy, TargetRange
from services import RunHistoryService, SimulationService

logger = logging.getLogger(__name__)

EXIT_CONVERGED = 0
EXIT_NOT_CONVERGED = 1
EXIT_ERROR = 2


def parse_core_list(text):
    """Parse '15,30,60' or '15-240' (or a mix) into an ordered list of core counts."""
    cores = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        low, sep, high = part.partition('-')
        try:
            if sep:
                cores.extend(range(int(low), int(high) + 1))
            else:
                cores.append(int(part))
        except ValueError:
            raise click.BadParameter(f"'{part}' is not a core count or range")
    if not cores or min(cores) < 1:
        raise click.BadParameter("core counts must be positive")
    return cores


@contextmanager
def _archive(database_uri):
    """Open the run archive for one command and close its session afterwards."""
    if not database_uri:
        yield None
        return
    data_manager = SQLiteDataManager(create_session_factory(database_uri))
    try:
        yield data_manager
    finally:
        data_manager.close()


def _fail(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


@click.group()
@click.option('--log-level', default='INFO', show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Elastic resource simulator for parallel applications."""
    logging.basicConfig(level=getattr(logging, log_level.upper()),
                        format='%(levelname)s %(name)s: %(message)s')


@cli.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False), help='Write the per-step trace CSV here.')
@click.option('--summary', 'summary_path', type=click.Path(dir_okay=False), help='Write the run summary here.')
@click.option('--seed', type=int, help='Override the workload and cluster seeds.')
@click.option('--db', 'database_uri', envvar='ELASTIC_DATABASE_URI', help='Archive the run in this database.')
def run(config, trace_path, summary_path, seed, database_uri):
    """Run a scenario and report whether it converged."""
    with _archive(database_uri) as archive:
        service = SimulationService(archive)
        success, scenario = service.load_scenario(config, seed=seed)
        if not success:
            _fail(scenario)

        success, result = service.run_scenario(scenario, trace_path=trace_path, summary_path=summary_path)
        if not success:
            _fail(result)
    if trace_path:
        logger.info(f"Trace of '{scenario.name}' written to {trace_path}")

    text = io.StringIO()
    write_summary(result.summary, text)
    click.echo(text.getvalue(), nl=False)
    sys.exit(EXIT_CONVERGED if result.summary.converged else EXIT_NOT_CONVERGED)


@cli.command()
@click.option('--cores', 'n', type=int, required=True, help='Current core count.')
@click.option('--ce', type=float, required=True, help='Measured communication efficiency.')
@click.option('--range', 'ce_range', type=(float, float), required=True, help='Target CE range MIN MAX.')
@click.option('--rate', type=float, default=2.0, show_default=True, help='Rate of change of the core count.')
@click.option('--min-cores', type=int, default=15, show_default=True)
@click.option('--max-cores', type=int, default=240, show_default=True)
def estimate(n, ce, ce_range, rate, min_cores, max_cores):
    """Estimate the core count reaching the middle of a target CE range."""
    try:
        target_range = TargetRange(*ce_range)
        policy = ClampPolicy(rate_of_change=rate, min_cores=min_cores, max_cores=max_cores)
        measured, clamped_input = sanitize_measured_ce(ce)
        if clamped_input:
            click.echo(f"warning: measured CE {ce} clamped to {measured!r}", err=True)
        raw = estimate_cores(n, measured, target_ce(target_range))
        in_range = target_range.contains(ce)
        cores = n if in_range else clamp_and_round(raw, n, policy)
    except ElasticError as e:
        _fail(str(e))

    click.echo(f"target_ce = {format_float(target_ce(target_range))}")
    click.echo(f"raw_estimate = {format_float(raw)}")
    click.echo(f"in_range = {'true' if in_range else 'false'}")
    click.echo(f"clamped_cores = {cores}")


@cli.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('--cores', 'cores_text', help='Core counts, e.g. 15,30,60 or 15-240. Defaults to [min_cores, max_cores].')
@click.option('--steps-per-point', type=int, default=10, show_default=True)
@click.option('--start-step', type=int, default=0, show_default=True)
@click.option('--anchor', 'anchors', type=int, multiple=True, help='Reference core count for predicted CE columns.')
@click.option('--noiseless', is_flag=True, help='Remove imbalance and noise from the workload.')
@click.option('--output', type=click.File('w'), default='-', help='CSV destination (stdout by default).')
def sweep(config, cores_text, steps_per_point, start_step, anchors, noiseless, output):
    """Tabulate CE, LB and PE against the core count."""
    service = SimulationService()
    success, scenario = service.load_scenario(config)
    if not success:
        _fail(scenario)

    clamp = scenario.controller.clamp
    core_counts = parse_core_list(cores_text) if cores_text else list(range(clamp.min_cores, clamp.max_cores + 1))

    success, rows = service.sweep(scenario, core_counts, steps_per_point=steps_per_point,
                                  use_noiseless=noiseless, anchors=anchors, start_step=start_step)
    if not success:
        _fail(rows)

    anchor_list = list(rows[0].predictions) if rows else []
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(['cores', 'ce', 'lb', 'pe', 'max_work', 'max_comm', 'elapsed']
                    + [f'predicted_ce_from_{a}' for a in anchor_list])
    for row in rows:
        m = row.metrics
        writer.writerow([row.cores] + [format_float(v) for v in (m.ce, m.lb, m.pe, m.max_work, m.max_comm, m.elapsed_time)]
                        + [format_float(row.predictions[a]) for a in anchor_list])


@cli.command()
@click.option('--db', 'database_uri', envvar='ELASTIC_DATABASE_URI', required=True, help='Archive database URL.')
@click.option('--scenario', 'scenario_name', help='Only list runs of this scenario.')
@click.option('--delete', 'delete_id', type=int, help='Delete the run with this ID.')
def history(database_uri, scenario_name, delete_id):
    """List or delete archived runs."""
    with _archive(database_uri) as archive:
        service = RunHistoryService(archive)

        if delete_id is not None:
            success, result = service.delete_run(delete_id)
            if not success:
                _fail(result)
            click.echo(f"Deleted run {delete_id} of scenario '{result}'")
            return

        runs = service.get_all_runs(scenario_name)
        if not runs:
            click.echo("No archived runs.")
            return
        for r in runs:
            click.echo(f"{r.id:>4}  {r.scenario_name:<20} seed={r.seed:<6} steps={r.optimization_steps:<3} "
                       f"cores={r.final_cores:<4} ce={format_float(r.final_window_ce) or '-':<12} "
                       f"converged={'yes' if r.converged else 'no'}")


if __name__ == '__main__':
    cli()
