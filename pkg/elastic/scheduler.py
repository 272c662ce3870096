"""
Malleable-job resource manager model.

Shrinks are released immediately. Grows are provisioned after a latency drawn
from the cluster's latency model; under contention the grant is pushed back by
a further draw. With a grant timeout configured, a grow that would arrive later
than the timeout is denied when the timeout expires.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from models import ClusterModel, LatencyKind, LatencyModel
from .errors import CapacityError, InvalidInputError, ProtocolError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PendingResize:
    requested_cores: int
    issued_at: float
    ready_at: float
    denied: bool = False


@dataclass(frozen=True)
class AllocationState:
    allocated_cores: int
    allocated_nodes: int
    pending: Optional[PendingResize] = None
    request_count: int = 0

    def __post_init__(self):
        if self.allocated_cores < 1:
            raise InvalidInputError("A running job holds at least one core.")


@dataclass(frozen=True)
class GrantEvent:
    cores: int
    requested_at: float
    delivered_at: float
    denied: bool = False

    @property
    def latency(self) -> float:
        return self.delivered_at - self.requested_at


def allocate(cluster: ClusterModel, cores: int) -> AllocationState:
    if not 1 <= cores <= cluster.capacity:
        raise CapacityError(f"Cannot allocate {cores} cores on a {cluster.capacity}-core cluster")
    return AllocationState(allocated_cores=cores, allocated_nodes=cluster.nodes_for(cores))


def sample_latency(model: LatencyModel, rng: np.random.Generator, step_seconds: float) -> float:
    if model.kind is LatencyKind.STEPS:
        return model.value * step_seconds
    if model.kind is LatencyKind.FIXED:
        return model.value
    return float(rng.uniform(model.value, model.upper))


def request_resize(state: AllocationState, cluster: ClusterModel, target_cores: int, now: float,
                   step_seconds: float = 0.0) -> AllocationState:
    if state.pending is not None:
        raise ProtocolError(f"A request for {state.pending.requested_cores} cores is still pending")
    if target_cores < 1:
        raise InvalidInputError(f"Target core count must be >= 1, got {target_cores}")
    if target_cores > cluster.capacity:
        raise CapacityError(f"Requested {target_cores} cores but the cluster holds {cluster.capacity}")

    request_count = state.request_count + 1

    if target_cores <= state.allocated_cores:
        logger.info(f"Shrink {state.allocated_cores} -> {target_cores} cores released at t={now:.3f}")
        pending = PendingResize(target_cores, issued_at=now, ready_at=now)
        return replace(state, pending=pending, request_count=request_count)

    rng = np.random.default_rng([cluster.rng_seed, request_count])
    latency = sample_latency(cluster.grow_latency, rng, step_seconds)
    if cluster.contention_probability > 0 and rng.random() < cluster.contention_probability:
        extra = sample_latency(cluster.grow_latency, rng, step_seconds)
        logger.info(f"Contention delays grow to {target_cores} cores by {extra:.3f} s")
        latency += extra

    denied = cluster.grant_timeout is not None and latency > cluster.grant_timeout
    if denied:
        latency = cluster.grant_timeout

    logger.info(f"Grow {state.allocated_cores} -> {target_cores} cores requested at t={now:.3f}, "
                f"{'denial' if denied else 'grant'} due at t={now + latency:.3f}")
    pending = PendingResize(target_cores, issued_at=now, ready_at=now + latency, denied=denied)
    return replace(state, pending=pending, request_count=request_count)


def poll(state: AllocationState, cluster: ClusterModel, now: float) -> Tuple[AllocationState, Optional[GrantEvent]]:
    pending = state.pending
    if pending is None or pending.ready_at > now:
        return state, None

    event = GrantEvent(pending.requested_cores, pending.issued_at, now, denied=pending.denied)
    if pending.denied:
        return replace(state, pending=None), event

    granted = replace(
        state,
        allocated_cores=pending.requested_cores,
        allocated_nodes=cluster.nodes_for(pending.requested_cores),
        pending=None,
    )
    return granted, event
