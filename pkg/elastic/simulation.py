"""
Scenario driver: one deterministic loop over the simulated time steps.

Per step: generate timings, advance the controller, forward a new request to
the scheduler, poll the scheduler and, on a grant, charge the restart and move
the application to the new core count.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

from models import EventKind, RunSummary, ScenarioConfig, TraceRecord
from . import controller, scheduler
from .metrics import compute_metrics
from .trace import TraceRecorder, empty_summary, summarize
from .workload import WorkloadGenerator, restart_cost

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    summary: RunSummary
    records: List[TraceRecord]


def run_scenario(config: ScenarioConfig, recorder: Optional[TraceRecorder] = None) -> SimulationResult:
    recorder = recorder or TraceRecorder()
    cfg = config.controller
    cluster = config.cluster

    if cfg.total_steps == 0:
        logger.info(f"Scenario '{config.name}' has no steps to run")
        return SimulationResult(empty_summary(cfg), recorder.records)

    generator = WorkloadGenerator(config.workload)
    state = controller.initial_state(cfg)
    allocation = scheduler.allocate(cluster, cfg.initial_cores)
    now = 0.0

    logger.info(f"Running scenario '{config.name}': {cfg.total_steps} steps from {cfg.initial_cores} cores, "
                f"target CE [{cfg.target_range.ce_min}, {cfg.target_range.ce_max}]")

    for step in range(cfg.total_steps):
        cores = state.current_cores
        timing = generator.generate_step(step, cores)
        instant = compute_metrics(timing)
        now += instant.elapsed_time

        state, event = controller.on_step_complete(state, cfg, timing)
        window = event.metrics if event is not None else None
        recorder.record(TraceRecord(
            step=step,
            simulated_time=now,
            cores=cores,
            instantaneous_ce=instant.ce,
            window_ce=window.ce if window else None,
            lb=window.lb if window else None,
            pe=window.pe if window else None,
            phase=state.phase,
            event=event.kind if event is not None else None,
        ))

        if event is not None and event.decision.ce_clamped:
            recorder.record(TraceRecord(step, now, cores, phase=state.phase, event=EventKind.CE_CLAMPED))

        if state.pending_request is not None and allocation.pending is None:
            allocation = scheduler.request_resize(
                allocation, cluster, state.pending_request.requested_cores, now,
                step_seconds=instant.elapsed_time)
            recorder.record(TraceRecord(step, now, cores, phase=state.phase, event=EventKind.RESIZE_REQUESTED))

        allocation, grant = scheduler.poll(allocation, cluster, now)
        if grant is None:
            continue

        if grant.denied:
            state = controller.on_resources_denied(state)
            recorder.record(TraceRecord(step, now, cores, phase=state.phase, event=EventKind.DENIED))
            continue

        latency_steps = step - state.pending_request.issued_at_step
        state = controller.on_resources_granted(state, grant.cores, cfg)
        logger.info(f"Step {step}: granted {grant.cores} cores after {grant.latency:.3f} s ({latency_steps} steps)")
        recorder.record(TraceRecord(step, now, state.current_cores, phase=state.phase, event=EventKind.GRANTED))

        now += restart_cost(config.workload, cores, state.current_cores)
        state = controller.on_restart_complete(state)
        recorder.record(TraceRecord(step, now, state.current_cores, phase=state.phase, event=EventKind.RESTARTED))

    state = controller.finish(state)
    summary = summarize(recorder.records, cfg)
    logger.info(f"Scenario '{config.name}' {state.phase.value}: {summary.optimization_steps} optimization steps, "
                f"final cores {summary.final_cores}, converged={summary.converged}")
    return SimulationResult(summary, recorder.records)
