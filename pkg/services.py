"""
Service layer for the elastic simulator
Handles scenario loading, runs, sweeps and the run archive
"""
import configparser
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from elastic.errors import ElasticError
from elastic.estimator import predict_ce
from elastic.simulation import run_scenario
from elastic.trace import TraceRecorder, write_summary
from elastic.workload import noiseless, sweep_ce
from models import EfficiencyMetrics, ScenarioConfig, SimulationRun, TraceEntry
from validators import validate_scenario_data

logger = logging.getLogger(__name__)


class BaseService:
    """Base class for services to handle common patterns like error wrapping."""
    def __init__(self, data_manager=None):
        self.data_manager = data_manager

    def _execute_service_method(self, func, *args, **kwargs):
        """Helper method to wrap service calls with generic error handling."""
        try:
            return True, func(*args, **kwargs)
        except (ElasticError, ValueError) as e:
            logger.warning(f"Service error in {func.__name__}: {str(e)}")
            return False, str(e)
        except OSError as e:
            logger.error(f"I/O error in {func.__name__}: {str(e)}")
            return False, f"I/O error: {e}"
        except Exception as e:
            logger.error(f"Unexpected service error in {func.__name__}: {str(e)}")
            return False, "An unexpected error occurred. Please check the log."


@dataclass
class SweepRow:
    cores: int
    metrics: EfficiencyMetrics
    predictions: Dict[int, Optional[float]] = field(default_factory=dict)


class SimulationService(BaseService):
    def load_scenario(self, path, seed=None):
        """
        Read and validate a scenario file

        Returns:
            tuple: (success, scenario_or_error_message)
        """
        path = Path(path)
        parser = configparser.ConfigParser(inline_comment_prefixes=(';', '#'), interpolation=None)
        try:
            with path.open(encoding='utf-8') as handle:
                parser.read_file(handle)
            sections = {name: dict(parser[name]) for name in parser.sections()}
        except (OSError, configparser.Error) as e:
            logger.warning(f"Cannot read scenario {path}: {str(e)}")
            return False, f"Cannot read scenario {path}: {e}"

        is_valid, result = validate_scenario_data(sections, default_name=path.stem, seed_override=seed)
        if not is_valid:
            logger.warning(f"Invalid scenario {path}: {result}")
        return is_valid, result

    def run_scenario(self, config: ScenarioConfig, trace_path=None, summary_path=None):
        """
        Run a scenario, writing the trace and summary files when paths are given
        and archiving the run when a data manager is configured

        Returns:
            tuple: (success, SimulationResult_or_error_message)
        """
        def _run_operation():
            if trace_path is None:
                result = run_scenario(config)
            else:
                with open(trace_path, 'w', newline='', encoding='utf-8') as stream:
                    result = run_scenario(config, TraceRecorder(stream))

            if summary_path is not None:
                with open(summary_path, 'w', encoding='utf-8') as stream:
                    write_summary(result.summary, stream)

            if self.data_manager is not None:
                self.data_manager.add_run(_archive_row(config, result))
            return result

        return self._execute_service_method(_run_operation)

    def sweep(self, config: ScenarioConfig, core_counts: Sequence[int], steps_per_point=10,
              use_noiseless=False, anchors: Sequence[int] = (), start_step=0):
        """
        Aggregate metrics on each core count, with CE predicted from each anchor

        Returns:
            tuple: (success, list_of_SweepRow_or_error_message)
        """
        def _sweep_operation():
            profile = noiseless(config.workload) if use_noiseless else config.workload
            points = sweep_ce(profile, list(core_counts), steps_per_point, start_step)
            measured = dict(points)

            anchor_list = list(anchors) or _default_anchors([cores for cores, _ in points])
            missing = [a for a in anchor_list if a not in measured]
            if missing:
                raise ValueError(f"Anchors {missing} are not among the swept core counts")

            rows = []
            for cores, metrics in points:
                predictions = {a: _prediction(a, measured[a].ce, cores) for a in anchor_list}
                rows.append(SweepRow(cores, metrics, predictions))
            return rows

        return self._execute_service_method(_sweep_operation)

    def admissible_cores(self, config: ScenarioConfig, steps_per_point=10) -> List[int]:
        """Core counts whose noiseless CE lies in the target range."""
        clamp = config.controller.clamp
        grid = range(clamp.min_cores, clamp.max_cores + 1)
        points = sweep_ce(noiseless(config.workload), list(grid), steps_per_point,
                          config.controller.starting_step)
        return [cores for cores, metrics in points if config.controller.target_range.contains(metrics.ce)]


def _default_anchors(core_counts):
    if not core_counts:
        return []
    picks = [core_counts[0], core_counts[len(core_counts) // 2], core_counts[-1]]
    return list(dict.fromkeys(picks))


def _prediction(anchor, anchor_ce, cores):
    if anchor_ce >= 1.0:
        return None
    return predict_ce(anchor, anchor_ce, cores)


def _archive_row(config, result):
    summary = result.summary
    run = SimulationRun(
        scenario_name=config.name,
        seed=config.workload.rng_seed,
        optimization_steps=summary.optimization_steps,
        final_cores=summary.final_cores,
        final_window_ce=summary.final_window_ce,
        converged=summary.converged,
        core_hours=summary.core_hours,
        baseline_core_hours=summary.baseline_core_hours,
        restart_overhead_total=summary.restart_overhead_total,
    )
    run.records = [
        TraceEntry(
            step=r.step,
            simulated_time=r.simulated_time,
            cores=r.cores,
            instantaneous_ce=r.instantaneous_ce,
            window_ce=r.window_ce,
            lb=r.lb,
            pe=r.pe,
            phase=r.phase.value,
            event=r.event.value if r.event is not None else None,
        )
        for r in result.records
    ]
    return run


class RunHistoryService(BaseService):
    def get_all_runs(self, scenario_name=None):
        """Get archived runs, optionally of one scenario"""
        return self.data_manager.get_runs_for_scenario(scenario_name)

    def get_run_by_id(self, run_id):
        return self.data_manager.get_run_by_id(run_id)

    def delete_run(self, run_id):
        """
        Delete an archived run

        Returns:
            tuple: (success, scenario_name_or_error_message)
        """
        run = self.data_manager.get_run_by_id(run_id)
        if not run:
            return False, "Run not found."

        scenario_name = run.scenario_name

        def _delete_run_operation():
            if self.data_manager.delete_run(run_id):
                return scenario_name
            raise ValueError("Error deleting run.")

        return self._execute_service_method(_delete_run_operation)
