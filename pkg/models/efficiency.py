from dataclasses import dataclass


@dataclass(frozen=True)
class EfficiencyMetrics:
    elapsed_time: float
    total_work: float
    max_work: float
    max_comm: float
    ce: float
    lb: float
    pe: float
    processes: int
