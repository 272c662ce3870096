from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from elastic.errors import InvalidInputError


@dataclass(frozen=True)
class ProcessTiming:
    work_time: float
    comm_time: float

    def __post_init__(self):
        if self.work_time < 0 or self.comm_time < 0:
            raise InvalidInputError(
                f"Process timings must be non-negative, got work={self.work_time}, comm={self.comm_time}")


@dataclass(frozen=True, eq=False)
class TimingWindow:
    """
    Accumulated per-process useful-work and communication seconds over an
    inclusive span of time steps. Index i of both arrays is process i.
    """
    work_time: np.ndarray
    comm_time: np.ndarray
    step_span: tuple = field(default=(0, 0))

    def __post_init__(self):
        work = np.array(self.work_time, dtype=float)
        comm = np.array(self.comm_time, dtype=float)
        if work.ndim != 1 or work.shape != comm.shape:
            raise InvalidInputError("Work and communication timings must be 1-D arrays of equal length.")
        if np.any(work < 0) or np.any(comm < 0):
            raise InvalidInputError("Process timings must be non-negative.")
        first, last = self.step_span
        if last < first:
            raise InvalidInputError(f"Empty step span {self.step_span}.")
        work.setflags(write=False)
        comm.setflags(write=False)
        object.__setattr__(self, 'work_time', work)
        object.__setattr__(self, 'comm_time', comm)
        object.__setattr__(self, 'step_span', (int(first), int(last)))

    @classmethod
    def from_timings(cls, timings: Iterable[ProcessTiming], step_span=(0, 0)):
        timings = list(timings)
        return cls(
            work_time=np.array([t.work_time for t in timings], dtype=float),
            comm_time=np.array([t.comm_time for t in timings], dtype=float),
            step_span=step_span,
        )

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple], step_span=(0, 0)):
        """Build a window from (work, comm) pairs."""
        return cls.from_timings((ProcessTiming(w, c) for w, c in pairs), step_span)

    @classmethod
    def zeros(cls, processes, step_span=(0, 0)):
        return cls(np.zeros(processes), np.zeros(processes), step_span)

    @property
    def processes(self) -> int:
        return int(self.work_time.size)

    @property
    def step_count(self) -> int:
        return self.step_span[1] - self.step_span[0] + 1

    @property
    def per_process(self) -> list:
        return [ProcessTiming(float(w), float(c)) for w, c in zip(self.work_time, self.comm_time)]

    def scaled(self, factor: float):
        if factor <= 0:
            raise InvalidInputError("Scale factor must be positive.")
        return TimingWindow(self.work_time * factor, self.comm_time * factor, self.step_span)

    def __eq__(self, other):
        if not isinstance(other, TimingWindow):
            return NotImplemented
        return (self.step_span == other.step_span
                and np.array_equal(self.work_time, other.work_time)
                and np.array_equal(self.comm_time, other.comm_time))

    __hash__ = None
