"""
Configuration value types for controller, workload and cluster
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from elastic.errors import ConfigurationError


@dataclass(frozen=True)
class TargetRange:
    ce_min: float
    ce_max: float

    def __post_init__(self):
        if not 0 < self.ce_min < self.ce_max < 1:
            raise ConfigurationError(
                f"Target range must satisfy 0 < ce_min < ce_max < 1, got [{self.ce_min}, {self.ce_max}]")

    def contains(self, ce: float) -> bool:
        # Closed interval: the bounds themselves are accepted.
        return self.ce_min <= ce <= self.ce_max


@dataclass(frozen=True)
class ClampPolicy:
    rate_of_change: float
    min_cores: int
    max_cores: int
    node_granularity: int = 1
    snap_to_nodes: bool = False

    def __post_init__(self):
        if self.rate_of_change <= 1:
            raise ConfigurationError(f"Rate of change must be > 1, got {self.rate_of_change}")
        if self.min_cores < 1 or self.min_cores > self.max_cores:
            raise ConfigurationError(
                f"Core limits must satisfy 1 <= min_cores <= max_cores, got [{self.min_cores}, {self.max_cores}]")
        if self.node_granularity < 1:
            raise ConfigurationError(f"Node granularity must be >= 1, got {self.node_granularity}")


@dataclass(frozen=True)
class ControllerConfig:
    target_range: TargetRange
    averaging_period: int
    clamp: ClampPolicy
    initial_cores: int
    starting_step: int = 0
    total_steps: int = 100
    convergence_windows: int = 3

    def __post_init__(self):
        if self.averaging_period < 1:
            raise ConfigurationError(f"Averaging period must be >= 1, got {self.averaging_period}")
        if not self.clamp.min_cores <= self.initial_cores <= self.clamp.max_cores:
            raise ConfigurationError(
                f"Initial cores {self.initial_cores} outside [{self.clamp.min_cores}, {self.clamp.max_cores}]")
        if self.starting_step < 0:
            raise ConfigurationError(f"Starting step must be >= 0, got {self.starting_step}")
        if self.total_steps < 0:
            raise ConfigurationError(f"Total steps must be >= 0, got {self.total_steps}")
        if self.convergence_windows < 1:
            raise ConfigurationError(f"Convergence windows must be >= 1, got {self.convergence_windows}")


class ScheduleKind(str, Enum):
    CONSTANT = 'constant'
    HEAVISIDE_RAMP = 'heaviside_ramp'


@dataclass(frozen=True)
class IterationSchedule:
    """
    Solver iterations per time step.

    The ramp form is plateau * (1 - H(x - jump)) + (offset + x) * H(x - jump),
    with H the Heaviside step and H(0) = 1.
    """
    kind: ScheduleKind = ScheduleKind.CONSTANT
    constant: int = 1
    plateau: int = 20
    jump_step: int = 50
    offset: int = 10

    def __post_init__(self):
        if self.kind is ScheduleKind.CONSTANT and self.constant < 1:
            raise ConfigurationError(f"Constant iteration count must be >= 1, got {self.constant}")
        if self.kind is ScheduleKind.HEAVISIDE_RAMP:
            if self.plateau < 1 or self.jump_step < 0 or self.offset + self.jump_step < 1:
                raise ConfigurationError("Ramp schedule must yield at least one iteration per step.")


class Scheme(str, Enum):
    IMPLICIT = 'implicit'
    EXPLICIT = 'explicit'


@dataclass(frozen=True)
class RestartCostModel:
    fixed_seconds: float = 0.0
    size_core_seconds: float = 0.0

    def __post_init__(self):
        if self.fixed_seconds < 0 or self.size_core_seconds < 0:
            raise ConfigurationError("Restart cost constants must be non-negative.")


@dataclass(frozen=True)
class WorkloadProfile:
    total_work: float
    comm_base: float
    comm_log_slope: float = 0.0
    imbalance_amplitude: float = 0.0
    noise_amplitude: float = 0.0
    iteration_schedule: IterationSchedule = field(default_factory=IterationSchedule)
    scheme: Scheme = Scheme.IMPLICIT
    rng_seed: int = 0
    reference_cores: int = 15
    restart: RestartCostModel = field(default_factory=RestartCostModel)

    def __post_init__(self):
        if self.total_work <= 0:
            raise ConfigurationError(f"Total work per step must be > 0, got {self.total_work}")
        if self.comm_base < 0:
            raise ConfigurationError(f"Communication base must be >= 0, got {self.comm_base}")
        if not 0 <= self.imbalance_amplitude <= 0.5:
            raise ConfigurationError(f"Imbalance amplitude must lie in [0, 0.5], got {self.imbalance_amplitude}")
        if not 0 <= self.noise_amplitude <= 0.5:
            raise ConfigurationError(f"Noise amplitude must lie in [0, 0.5], got {self.noise_amplitude}")
        if self.reference_cores < 1:
            raise ConfigurationError(f"Reference cores must be >= 1, got {self.reference_cores}")
        if self.rng_seed < 0:
            raise ConfigurationError(f"Seed must be non-negative, got {self.rng_seed}")


class LatencyKind(str, Enum):
    STEPS = 'steps'
    FIXED = 'fixed'
    UNIFORM = 'uniform'


@dataclass(frozen=True)
class LatencyModel:
    """Provisioning delay of a grow request, in simulated seconds."""
    kind: LatencyKind = LatencyKind.STEPS
    value: float = 2.0
    upper: float = 0.0

    def __post_init__(self):
        if self.value < 0:
            raise ConfigurationError(f"Latency must be non-negative, got {self.value}")
        if self.kind is LatencyKind.UNIFORM and self.upper < self.value:
            raise ConfigurationError(f"Uniform latency range [{self.value}, {self.upper}] is empty")


@dataclass(frozen=True)
class ClusterModel:
    cores_per_node: int = 15
    total_nodes: int = 16
    grow_latency: LatencyModel = field(default_factory=LatencyModel)
    contention_probability: float = 0.0
    grant_timeout: Optional[float] = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.cores_per_node < 1 or self.total_nodes < 1:
            raise ConfigurationError("Cluster must have at least one node of at least one core.")
        if not 0 <= self.contention_probability < 1:
            raise ConfigurationError(
                f"Contention probability must lie in [0, 1), got {self.contention_probability}")
        if self.grant_timeout is not None and self.grant_timeout <= 0:
            raise ConfigurationError(f"Grant timeout must be positive, got {self.grant_timeout}")
        if self.rng_seed < 0:
            raise ConfigurationError(f"Seed must be non-negative, got {self.rng_seed}")

    @property
    def capacity(self) -> int:
        return self.cores_per_node * self.total_nodes

    def nodes_for(self, cores: int) -> int:
        return math.ceil(cores / self.cores_per_node)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    controller: ControllerConfig
    workload: WorkloadProfile
    cluster: ClusterModel
    description: str = ''

    def __post_init__(self):
        if self.controller.clamp.max_cores > self.cluster.capacity:
            raise ConfigurationError(
                f"max_cores {self.controller.clamp.max_cores} exceeds cluster capacity {self.cluster.capacity}")
        if self.controller.initial_cores > self.cluster.capacity:
            raise ConfigurationError(
                f"initial_cores {self.controller.initial_cores} exceeds cluster capacity {self.cluster.capacity}")
