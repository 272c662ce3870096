"""
Parallel-efficiency metrics from per-process timing accumulators.

For P processes with useful work t_w^i and communication time t_c^i:

    t_e = max_i(t_w^i + t_c^i)      elapsed time
    t_w = sum_i t_w^i               total useful work
    CE  = max_i(t_w^i) / t_e        communication efficiency
    LB  = t_w / (max_i(t_w^i) * P)  load balance
    PE  = t_w / (t_e * P)           parallel efficiency, equal to CE * LB
"""
import logging

import numpy as np

from models import EfficiencyMetrics, TimingWindow
from .errors import DegenerateWindowError, InvalidInputError, InvalidMergeError

logger = logging.getLogger(__name__)


def compute_metrics(window: TimingWindow) -> EfficiencyMetrics:
    processes = window.processes
    if processes < 1:
        raise InvalidInputError("Cannot compute metrics of a window without processes.")

    work = window.work_time
    comm = window.comm_time
    elapsed = float(np.max(work + comm))
    max_work = float(np.max(work))
    if elapsed <= 0 or max_work <= 0:
        raise DegenerateWindowError(
            f"Window {window.step_span} has no useful work on any of its {processes} processes")

    total_work = float(np.sum(work))
    # Summation rounding can lift a perfectly balanced ratio a few ulps above 1.
    ce = min(1.0, max_work / elapsed)
    lb = min(1.0, total_work / (max_work * processes))
    pe = min(1.0, total_work / (elapsed * processes))

    return EfficiencyMetrics(
        elapsed_time=elapsed,
        total_work=total_work,
        max_work=max_work,
        max_comm=float(np.max(comm)),
        ce=ce,
        lb=lb,
        pe=pe,
        processes=processes,
    )


def merge_windows(a: TimingWindow, b: TimingWindow) -> TimingWindow:
    """Accumulate two adjacent windows measured on the same core count."""
    if a.processes != b.processes:
        raise InvalidMergeError(
            f"Cannot merge windows over {a.processes} and {b.processes} processes; "
            f"a core-count change invalidates accumulation")

    first, second = (a, b) if a.step_span[0] <= b.step_span[0] else (b, a)
    if second.step_span[0] != first.step_span[1] + 1:
        raise InvalidMergeError(f"Step spans {first.step_span} and {second.step_span} are not adjacent")

    return TimingWindow(
        work_time=first.work_time + second.work_time,
        comm_time=first.comm_time + second.comm_time,
        step_span=(first.step_span[0], second.step_span[1]),
    )
