from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Phase(str, Enum):
    WARMUP = 'WARMUP'
    MEASURING = 'MEASURING'
    AWAITING_RESOURCES = 'AWAITING_RESOURCES'
    RESTARTING = 'RESTARTING'
    DONE = 'DONE'


class EventKind(str, Enum):
    WINDOW_EVALUATED = 'WindowEvaluated'
    CE_CLAMPED = 'CeClamped'
    RESIZE_REQUESTED = 'ResizeRequested'
    GRANTED = 'Granted'
    DENIED = 'Denied'
    RESTARTED = 'Restarted'


@dataclass(frozen=True)
class TraceRecord:
    step: int
    simulated_time: float
    cores: int
    instantaneous_ce: Optional[float] = None
    window_ce: Optional[float] = None
    lb: Optional[float] = None
    pe: Optional[float] = None
    phase: Phase = Phase.MEASURING
    event: Optional[EventKind] = None


@dataclass(frozen=True)
class RunSummary:
    optimization_steps: int
    final_cores: int
    final_window_ce: Optional[float]
    converged: bool
    core_hours: float
    baseline_core_hours: float
    restart_overhead_total: float
