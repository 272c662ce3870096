from dataclasses import replace

import pytest

from elastic import controller
from elastic.errors import ConsistencyError, ProtocolError
from models import ClampPolicy, ControllerState, EventKind, Phase, ResizeReason, ResourceRequest

from conftest import balanced_window


def feed(state, cfg, steps, work, comm):
    events = []
    for step in steps:
        state, event = controller.on_step_complete(state, cfg, balanced_window(state.current_cores, work, comm, (step, step)))
        events.append(event)
    return state, events


def test_warmup_discards_steps_before_starting_step(controller_config):
    state = controller.initial_state(controller_config)
    assert state.phase is Phase.WARMUP

    state, events = feed(state, controller_config, [0, 1], work=9.8, comm=0.2)
    assert state.phase is Phase.WARMUP
    assert state.window is None
    assert events == [None, None]

    state, _ = feed(state, controller_config, [2], work=9.8, comm=0.2)
    assert state.phase is Phase.MEASURING
    assert state.window.step_span == (2, 2)


def test_no_warmup_without_starting_step(controller_config):
    cfg = replace(controller_config, starting_step=0)
    assert controller.initial_state(cfg).phase is Phase.MEASURING


def test_in_range_window_stays(controller_config):
    state = controller.initial_state(controller_config)
    state, events = feed(state, controller_config, range(0, 5), work=9.1, comm=0.9)

    event = events[-1]
    assert event.kind is EventKind.WINDOW_EVALUATED
    assert event.metrics.ce == pytest.approx(0.91)
    assert not event.decision.is_resize
    assert state.phase is Phase.MEASURING
    assert state.window is None
    assert events[:-1] == [None] * 4


def test_high_ce_requests_more_cores(controller_config):
    state = controller.initial_state(controller_config)
    state, events = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)

    decision = events[-1].decision
    assert decision.target_cores == 30
    assert decision.reason is ResizeReason.ABOVE_RANGE
    assert decision.raw_estimate == pytest.approx(72.692, abs=0.01)
    assert state.phase is Phase.AWAITING_RESOURCES
    assert state.pending_request.requested_cores == 30
    assert state.pending_request.issued_at_step == 4


def test_awaiting_resources_discards_timings(controller_config):
    state = controller.initial_state(controller_config)
    state, _ = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)
    state, events = feed(state, controller_config, range(5, 20), work=1.0, comm=9.0)

    assert events == [None] * 15
    assert state.phase is Phase.AWAITING_RESOURCES
    assert state.window is None


def test_grant_and_restart_cycle(controller_config):
    state = controller.initial_state(controller_config)
    state, _ = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)

    state = controller.on_resources_granted(state, 30)
    assert state.phase is Phase.RESTARTING
    assert state.current_cores == 30
    assert state.optimization_step_count == 1
    assert state.pending_request is None

    state = controller.on_restart_complete(state)
    assert state.phase is Phase.MEASURING

    # The first step on the new partition is skipped, the next three form a window.
    state, events = feed(state, controller_config, range(5, 9), work=9.1, comm=0.9)
    assert events[:3] == [None, None, None]
    assert events[3].kind is EventKind.WINDOW_EVALUATED
    assert events[3].metrics.processes == 30


def test_low_ce_requests_fewer_cores(controller_config):
    cfg = replace(controller_config, initial_cores=60)
    state = controller.initial_state(cfg)
    state, events = feed(state, cfg, range(0, 5), work=8.0, comm=2.0)

    decision = events[-1].decision
    assert decision.reason is ResizeReason.BELOW_RANGE
    assert decision.target_cores < 60
    assert decision.target_cores >= 30


def test_clamp_to_current_count_stays(controller_config):
    state = controller.initial_state(controller_config)
    state, events = feed(state, controller_config, range(0, 5), work=5.0, comm=5.0)

    decision = events[-1].decision
    assert not decision.is_resize
    assert decision.raw_estimate < 15
    assert state.phase is Phase.MEASURING


def test_unit_ce_is_clamped_before_estimation(controller_config):
    state = controller.initial_state(controller_config)
    state, events = feed(state, controller_config, range(0, 5), work=4.0, comm=0.0)

    decision = events[-1].decision
    assert events[-1].metrics.ce == 1.0
    assert decision.ce_clamped
    assert decision.target_cores == 30


def test_denial_returns_to_measuring(controller_config):
    state = controller.initial_state(controller_config)
    state, _ = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)

    state = controller.on_resources_denied(state)
    assert state.phase is Phase.MEASURING
    assert state.pending_request is None
    assert state.current_cores == 15


def test_core_count_mismatch_is_a_consistency_error(controller_config):
    state = controller.initial_state(controller_config)
    with pytest.raises(ConsistencyError):
        controller.on_step_complete(state, controller_config, balanced_window(16, 1.0, 0.1, (0, 0)))


def test_protocol_violations(controller_config):
    state = controller.initial_state(controller_config)
    with pytest.raises(ProtocolError):
        controller.on_resources_granted(state, 30)
    with pytest.raises(ProtocolError):
        controller.on_restart_complete(state)
    with pytest.raises(ProtocolError):
        controller.on_resources_denied(state)

    state, _ = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)
    with pytest.raises(ProtocolError):
        controller.on_resources_granted(state, 45)


def test_finish_ends_the_run(controller_config):
    state = controller.initial_state(controller_config)
    state, _ = feed(state, controller_config, range(0, 5), work=9.8, comm=0.2)

    state = controller.finish(state)
    assert state.phase is Phase.DONE
    assert state.pending_request is None
    with pytest.raises(ProtocolError):
        controller.on_step_complete(state, controller_config, balanced_window(15, 1.0, 0.1, (5, 5)))


def test_node_snapping_applies_to_requests(controller_config):
    cfg = replace(controller_config, clamp=ClampPolicy(2.0, 15, 240, node_granularity=15, snap_to_nodes=True),
                  initial_cores=20)
    state = controller.initial_state(cfg)
    state, events = feed(state, cfg, range(0, 5), work=9.8, comm=0.2)
    assert events[-1].decision.target_cores == 30


def test_core_count_outside_limits_is_a_consistency_error(controller_config):
    state = ControllerState(phase=Phase.MEASURING, current_cores=300)
    with pytest.raises(ConsistencyError):
        controller.on_step_complete(state, controller_config, balanced_window(300, 1.0, 0.1, (5, 5)))


def test_grant_outside_limits_is_rejected(controller_config):
    request = ResourceRequest(requested_cores=300, issued_at_step=4, reason=ResizeReason.ABOVE_RANGE)
    state = ControllerState(phase=Phase.AWAITING_RESOURCES, current_cores=150, pending_request=request)

    with pytest.raises(ProtocolError):
        controller.on_resources_granted(state, 300, controller_config)
    assert controller.on_resources_granted(state, 300).current_cores == 300
