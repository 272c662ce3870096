from .timing import ProcessTiming, TimingWindow
from .efficiency import EfficiencyMetrics
from .config import (
    TargetRange,
    ClampPolicy,
    ControllerConfig,
    ScheduleKind,
    IterationSchedule,
    Scheme,
    RestartCostModel,
    WorkloadProfile,
    LatencyKind,
    LatencyModel,
    ClusterModel,
    ScenarioConfig,
)
from .trace_record import Phase, EventKind, TraceRecord, RunSummary
from .controller_state import (
    ResizeReason,
    ResourceRequest,
    ElasticityDecision,
    ControllerState,
    ControllerEvent,
)
from .run import SimulationRun, TraceEntry
