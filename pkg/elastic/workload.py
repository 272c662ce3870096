"""
Synthetic parallel application.

Each time step on n cores produces, for process i,

    t_w^i = (W / n) (1 + beta u_i)
    t_c^i = kappa * iterations(step) * (1 + alpha log2(n / n_ref)) * (1 + sigma v_i)

u_i is fixed for a partition and redrawn whenever the core count changes;
v_i is redrawn every step. Both are uniform on [-1, 1] and come from numpy
generators keyed on (seed, stream, partition epoch[, step]), so the same seed
always yields the same timings.
"""
import logging
import math
from dataclasses import replace
from typing import List, Sequence, Tuple

import numpy as np

from models import (
    EfficiencyMetrics,
    IterationSchedule,
    RestartCostModel,
    ScheduleKind,
    Scheme,
    TimingWindow,
    WorkloadProfile,
)
from .errors import InvalidInputError
from .metrics import compute_metrics, merge_windows

logger = logging.getLogger(__name__)

_IMBALANCE_STREAM = 0
_NOISE_STREAM = 1


def iterations_at(schedule: IterationSchedule, step: int) -> int:
    if step < 0:
        raise InvalidInputError(f"Step must be >= 0, got {step}")
    if schedule.kind is ScheduleKind.CONSTANT:
        return schedule.constant
    if step < schedule.jump_step:
        return schedule.plateau
    return schedule.offset + step


def calibrate_comm_base(total_work: float, reference_cores: int, reference_ce: float, iterations: int) -> float:
    """
    Communication seconds per solver iteration giving a balanced, noiseless run
    on reference_cores an efficiency of reference_ce.
    """
    if not 0 < reference_ce <= 1:
        raise InvalidInputError(f"Reference CE must lie in (0, 1], got {reference_ce}")
    if iterations < 1 or reference_cores < 1:
        raise InvalidInputError("Reference cores and iterations must be >= 1.")
    return (total_work / reference_cores) * (1.0 / reference_ce - 1.0) / iterations


# Fitted so that the implicit scheme sits near CE 0.98 on one 15-core node with
# its default four solver iterations; the explicit scheme communicates half as
# much per step and is noisier.
PRESETS = {
    Scheme.IMPLICIT: {
        'total_work': 150.0,
        'reference_cores': 15,
        'reference_ce': 0.9826,
        'reference_iterations': 4,
        'comm_log_slope': 0.18,
        'imbalance_amplitude': 0.02,
        'noise_amplitude': 0.02,
        'restart_fixed_seconds': 1.0,
        'restart_size_core_seconds': 15.0,
    },
    Scheme.EXPLICIT: {
        'total_work': 150.0,
        'reference_cores': 15,
        'reference_ce': 0.9913,
        'reference_iterations': 1,
        'comm_log_slope': 0.05,
        'imbalance_amplitude': 0.02,
        'noise_amplitude': 0.10,
        'restart_fixed_seconds': 1.0,
        'restart_size_core_seconds': 15.0,
    },
}


def profile_from_preset(scheme: Scheme, **overrides) -> WorkloadProfile:
    """
    Build a workload profile from a calibration preset.

    Args:
        scheme: Which preset to start from
        overrides: WorkloadProfile fields replacing preset values

    Returns:
        WorkloadProfile
    """
    preset = PRESETS[Scheme(scheme)]
    total_work = overrides.get('total_work', preset['total_work'])
    reference_cores = overrides.get('reference_cores', preset['reference_cores'])
    fields = {
        'total_work': total_work,
        'comm_base': calibrate_comm_base(total_work, reference_cores,
                                         preset['reference_ce'], preset['reference_iterations']),
        'comm_log_slope': preset['comm_log_slope'],
        'imbalance_amplitude': preset['imbalance_amplitude'],
        'noise_amplitude': preset['noise_amplitude'],
        'iteration_schedule': IterationSchedule(constant=preset['reference_iterations']),
        'scheme': Scheme(scheme),
        'reference_cores': reference_cores,
        'restart': RestartCostModel(preset['restart_fixed_seconds'], preset['restart_size_core_seconds']),
    }
    fields.update(overrides)
    return WorkloadProfile(**fields)


def noiseless(profile: WorkloadProfile) -> WorkloadProfile:
    return replace(profile, imbalance_amplitude=0.0, noise_amplitude=0.0)


def comm_growth(profile: WorkloadProfile, cores: int) -> float:
    return max(0.0, 1.0 + profile.comm_log_slope * math.log2(cores / profile.reference_cores))


def restart_cost(profile: WorkloadProfile, cores_old: int, cores_new: int) -> float:
    """Checkpoint write, read and repartition seconds for a restart."""
    if cores_old < 1 or cores_new < 1:
        raise InvalidInputError(f"Core counts must be >= 1, got {cores_old} -> {cores_new}")
    model = profile.restart
    return model.fixed_seconds + model.size_core_seconds / min(cores_old, cores_new)


class WorkloadGenerator:
    """Owns the partition epoch; one generator per simulated run."""

    def __init__(self, profile: WorkloadProfile):
        self.profile = profile
        self._epoch = -1
        self._cores = None
        self._imbalance = None

    @property
    def epoch(self) -> int:
        return self._epoch

    def _uniform(self, size, *key):
        rng = np.random.default_rng([self.profile.rng_seed, *key])
        return rng.uniform(-1.0, 1.0, size)

    def _repartition(self, cores):
        self._epoch += 1
        self._cores = cores
        self._imbalance = self._uniform(cores, _IMBALANCE_STREAM, self._epoch)
        logger.debug(f"Partition epoch {self._epoch}: {cores} cores")

    def generate_step(self, step: int, cores: int) -> TimingWindow:
        if cores < 1:
            raise InvalidInputError(f"Core count must be >= 1, got {cores}")
        if step < 0:
            raise InvalidInputError(f"Step must be >= 0, got {step}")
        if cores != self._cores:
            self._repartition(cores)

        profile = self.profile
        work = (profile.total_work / cores) * (1.0 + profile.imbalance_amplitude * self._imbalance)

        per_step_comm = profile.comm_base * iterations_at(profile.iteration_schedule, step) * comm_growth(profile, cores)
        if profile.noise_amplitude > 0:
            noise = self._uniform(cores, _NOISE_STREAM, self._epoch, step)
            comm = per_step_comm * (1.0 + profile.noise_amplitude * noise)
        else:
            comm = np.full(cores, per_step_comm)

        return TimingWindow(np.maximum(work, 0.0), np.maximum(comm, 0.0), (step, step))


def sweep_ce(profile: WorkloadProfile, core_counts: Sequence[int], steps_per_point: int,
             start_step: int = 0) -> List[Tuple[int, EfficiencyMetrics]]:
    """Aggregate metrics of steps_per_point consecutive steps on each core count."""
    if not core_counts:
        raise InvalidInputError("Sweep needs at least one core count.")
    if steps_per_point < 1:
        raise InvalidInputError(f"Steps per point must be >= 1, got {steps_per_point}")

    generator = WorkloadGenerator(profile)
    results = []
    for cores in core_counts:
        window = None
        for step in range(start_step, start_step + steps_per_point):
            timing = generator.generate_step(step, cores)
            window = timing if window is None else merge_windows(window, timing)
        results.append((cores, compute_metrics(window)))
    return results
