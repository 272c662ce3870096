from dataclasses import dataclass
from enum import Enum
from typing import Optional

from elastic.errors import InvalidInputError
from .efficiency import EfficiencyMetrics
from .timing import TimingWindow
from .trace_record import EventKind, Phase


class ResizeReason(str, Enum):
    BELOW_RANGE = 'BELOW_RANGE'
    ABOVE_RANGE = 'ABOVE_RANGE'


@dataclass(frozen=True)
class ResourceRequest:
    requested_cores: int
    issued_at_step: int
    reason: ResizeReason


@dataclass(frozen=True)
class ElasticityDecision:
    """Stay when target_cores is None, otherwise resize to target_cores."""
    target_cores: Optional[int] = None
    reason: Optional[ResizeReason] = None
    raw_estimate: Optional[float] = None
    ce_clamped: bool = False

    @property
    def is_resize(self) -> bool:
        return self.target_cores is not None

    @classmethod
    def stay(cls, raw_estimate=None, ce_clamped=False):
        return cls(raw_estimate=raw_estimate, ce_clamped=ce_clamped)


@dataclass(frozen=True)
class ControllerState:
    phase: Phase
    current_cores: int
    window: Optional[TimingWindow] = None
    pending_request: Optional[ResourceRequest] = None
    optimization_step_count: int = 0
    skip_steps: int = 0

    def __post_init__(self):
        if (self.pending_request is not None) != (self.phase is Phase.AWAITING_RESOURCES):
            raise InvalidInputError("A pending request exists exactly while awaiting resources.")


@dataclass(frozen=True)
class ControllerEvent:
    kind: EventKind
    step: int
    metrics: Optional[EfficiencyMetrics] = None
    decision: Optional[ElasticityDecision] = None
