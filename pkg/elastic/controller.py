"""
Elastic control loop.

The controller is a state machine advanced once per completed time step:

    WARMUP -> MEASURING -> AWAITING_RESOURCES -> RESTARTING -> MEASURING ... -> DONE

Timings accumulate into an averaging window; a full window is turned into
metrics and compared with the target range. Out-of-range windows produce a
resource request; the application keeps stepping on its old allocation until
the scheduler grants (or denies) it.
"""
import logging
from dataclasses import replace
from typing import Optional, Tuple

from models import (
    ControllerConfig,
    ControllerEvent,
    ControllerState,
    EfficiencyMetrics,
    ElasticityDecision,
    EventKind,
    Phase,
    ResizeReason,
    ResourceRequest,
    TimingWindow,
)
from .errors import ConsistencyError, ProtocolError
from .estimator import clamp_and_round, estimate_cores, sanitize_measured_ce, target_ce
from .metrics import compute_metrics, merge_windows

logger = logging.getLogger(__name__)


def initial_state(cfg: ControllerConfig) -> ControllerState:
    phase = Phase.WARMUP if cfg.starting_step > 0 else Phase.MEASURING
    return ControllerState(phase=phase, current_cores=cfg.initial_cores)


def evaluate_window(metrics: EfficiencyMetrics, current_cores: int, cfg: ControllerConfig) -> ElasticityDecision:
    target_range = cfg.target_range
    if target_range.contains(metrics.ce):
        return ElasticityDecision.stay()

    reason = ResizeReason.BELOW_RANGE if metrics.ce < target_range.ce_min else ResizeReason.ABOVE_RANGE
    ce, ce_clamped = sanitize_measured_ce(metrics.ce)
    raw = estimate_cores(current_cores, ce, target_ce(target_range))
    target = clamp_and_round(raw, current_cores, cfg.clamp)

    if target == current_cores:
        logger.info(f"CE {metrics.ce:.4f} is {reason.value} but clamping keeps {current_cores} cores")
        return ElasticityDecision.stay(raw_estimate=raw, ce_clamped=ce_clamped)

    return ElasticityDecision(target_cores=target, reason=reason, raw_estimate=raw, ce_clamped=ce_clamped)


def _within_limits(cores: int, cfg: ControllerConfig) -> bool:
    return cfg.clamp.min_cores <= cores <= cfg.clamp.max_cores


def on_step_complete(state: ControllerState, cfg: ControllerConfig,
                     step_timing: TimingWindow) -> Tuple[ControllerState, Optional[ControllerEvent]]:
    if not _within_limits(state.current_cores, cfg):
        raise ConsistencyError(
            f"Controller runs {state.current_cores} cores, outside [{cfg.clamp.min_cores}, {cfg.clamp.max_cores}]")
    if step_timing.processes != state.current_cores:
        raise ConsistencyError(
            f"Step {step_timing.step_span} timed {step_timing.processes} processes "
            f"but the controller runs {state.current_cores} cores")

    step = step_timing.step_span[1]

    if state.phase is Phase.WARMUP:
        if step < cfg.starting_step:
            return state, None
        state = replace(state, phase=Phase.MEASURING)

    if state.phase is Phase.AWAITING_RESOURCES:
        # The application keeps running; nothing is measured until the restart.
        return state, None

    if state.phase is not Phase.MEASURING:
        raise ProtocolError(f"Step completion is not accepted in phase {state.phase.value}")

    if state.skip_steps > 0:
        return replace(state, skip_steps=state.skip_steps - 1), None

    window = step_timing if state.window is None else merge_windows(state.window, step_timing)
    if window.step_count < cfg.averaging_period:
        return replace(state, window=window), None

    metrics = compute_metrics(window)
    decision = evaluate_window(metrics, state.current_cores, cfg)
    event = ControllerEvent(EventKind.WINDOW_EVALUATED, step, metrics=metrics, decision=decision)

    if not decision.is_resize:
        logger.debug(f"Step {step}: CE {metrics.ce:.4f} on {state.current_cores} cores, staying")
        return replace(state, window=None), event

    request = ResourceRequest(requested_cores=decision.target_cores, issued_at_step=step, reason=decision.reason)
    logger.info(f"Step {step}: CE {metrics.ce:.4f} is {decision.reason.value}, "
                f"estimate {decision.raw_estimate:.2f}, requesting {state.current_cores} -> {request.requested_cores} cores")
    return replace(state, phase=Phase.AWAITING_RESOURCES, window=None, pending_request=request), event


def on_resources_granted(state: ControllerState, granted_cores: int,
                         cfg: Optional[ControllerConfig] = None) -> ControllerState:
    if state.phase is not Phase.AWAITING_RESOURCES or state.pending_request is None:
        raise ProtocolError(f"Grant of {granted_cores} cores without a pending request (phase {state.phase.value})")
    if granted_cores != state.pending_request.requested_cores:
        raise ProtocolError(
            f"Granted {granted_cores} cores but {state.pending_request.requested_cores} were requested")
    if cfg is not None and not _within_limits(granted_cores, cfg):
        raise ProtocolError(
            f"Granted {granted_cores} cores, outside [{cfg.clamp.min_cores}, {cfg.clamp.max_cores}]")

    return replace(
        state,
        phase=Phase.RESTARTING,
        current_cores=granted_cores,
        pending_request=None,
        window=None,
        optimization_step_count=state.optimization_step_count + 1,
    )


def on_restart_complete(state: ControllerState) -> ControllerState:
    if state.phase is not Phase.RESTARTING:
        raise ProtocolError(f"Restart completion is not accepted in phase {state.phase.value}")
    # The first step on the new partition is left out of the window.
    return replace(state, phase=Phase.MEASURING, window=None, skip_steps=1)


def on_resources_denied(state: ControllerState) -> ControllerState:
    if state.phase is not Phase.AWAITING_RESOURCES:
        raise ProtocolError(f"Denial without a pending request (phase {state.phase.value})")
    logger.warning(f"Request for {state.pending_request.requested_cores} cores denied; "
                   f"continuing on {state.current_cores} cores")
    return replace(state, phase=Phase.MEASURING, pending_request=None, window=None)


def finish(state: ControllerState) -> ControllerState:
    return replace(state, phase=Phase.DONE, pending_request=None, window=None, skip_steps=0)
