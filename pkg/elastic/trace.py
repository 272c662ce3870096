"""
Per-step trace recording and run summaries.

The trace is CSV with a header row and one record per line; absent values are
empty strings and floats carry 9 significant digits. Records are rounded to
that precision as they are recorded, so a summary of the in-memory trace and a
summary of the reread file are identical. Summary values get the same rounding,
so a written summary reads back unchanged.
"""
import csv
import logging
from dataclasses import fields, replace
from typing import Iterable, List, Optional, TextIO

from models import ControllerConfig, EventKind, Phase, RunSummary, TraceRecord
from .errors import InvalidInputError, SequencingError

logger = logging.getLogger(__name__)

TRACE_FIELDS = [f.name for f in fields(TraceRecord)]
SUMMARY_FIELDS = [f.name for f in fields(RunSummary)]
_FLOAT_FIELDS = ('simulated_time', 'instantaneous_ce', 'window_ce', 'lb', 'pe')


def format_float(value: Optional[float]) -> str:
    return '' if value is None else format(value, '.9g')


def _canonical(record: TraceRecord) -> TraceRecord:
    rounded = {name: _round(getattr(record, name)) for name in _FLOAT_FIELDS}
    return replace(record, **rounded)


def _round(value):
    return None if value is None else float(format(value, '.9g'))


class TraceRecorder:
    """Single-writer trace sink; the stream, when given, is flushed after every record."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.records: List[TraceRecord] = []
        self._stream = stream
        self._writer = None
        if stream is not None:
            self._writer = csv.writer(stream, lineterminator='\n')
            self._writer.writerow(TRACE_FIELDS)

    def record(self, record: TraceRecord) -> TraceRecord:
        if self.records and record.step < self.records[-1].step:
            raise SequencingError(f"Step {record.step} recorded after step {self.records[-1].step}")
        record = _canonical(record)
        self.records.append(record)
        if self._writer is not None:
            self._writer.writerow(_to_row(record))
            self._stream.flush()
        return record


def _to_row(record: TraceRecord) -> list:
    return [
        record.step,
        format_float(record.simulated_time),
        record.cores,
        format_float(record.instantaneous_ce),
        format_float(record.window_ce),
        format_float(record.lb),
        format_float(record.pe),
        record.phase.value,
        '' if record.event is None else record.event.value,
    ]


def _optional_float(text):
    return float(text) if text != '' else None


def read_trace(stream: TextIO) -> List[TraceRecord]:
    reader = csv.DictReader(stream)
    if reader.fieldnames != TRACE_FIELDS:
        raise InvalidInputError(f"Unexpected trace header {reader.fieldnames}")
    return [
        TraceRecord(
            step=int(row['step']),
            simulated_time=float(row['simulated_time']),
            cores=int(row['cores']),
            instantaneous_ce=_optional_float(row['instantaneous_ce']),
            window_ce=_optional_float(row['window_ce']),
            lb=_optional_float(row['lb']),
            pe=_optional_float(row['pe']),
            phase=Phase(row['phase']),
            event=EventKind(row['event']) if row['event'] else None,
        )
        for row in reader
    ]


def summarize(trace: Iterable[TraceRecord], cfg: ControllerConfig, k: Optional[int] = None) -> RunSummary:
    trace = list(trace)
    if not trace:
        raise InvalidInputError("Cannot summarize an empty trace.")
    k = cfg.convergence_windows if k is None else k

    windows = [r.window_ce for r in trace if r.event is EventKind.WINDOW_EVALUATED]
    recent = windows[-k:]
    converged = len(recent) == k and all(cfg.target_range.contains(ce) for ce in recent)

    core_seconds = 0.0
    restart_seconds = 0.0
    previous_time = 0.0
    for record in trace:
        duration = record.simulated_time - previous_time
        core_seconds += record.cores * duration
        if record.event is EventKind.RESTARTED:
            restart_seconds += duration
        previous_time = record.simulated_time

    return RunSummary(
        optimization_steps=sum(1 for r in trace if r.event is EventKind.GRANTED),
        final_cores=trace[-1].cores,
        final_window_ce=windows[-1] if windows else None,
        converged=converged,
        core_hours=_round(core_seconds),
        baseline_core_hours=_round(cfg.initial_cores * trace[-1].simulated_time),
        restart_overhead_total=_round(restart_seconds),
    )


def empty_summary(cfg: ControllerConfig) -> RunSummary:
    return RunSummary(
        optimization_steps=0,
        final_cores=cfg.initial_cores,
        final_window_ce=None,
        converged=False,
        core_hours=0.0,
        baseline_core_hours=0.0,
        restart_overhead_total=0.0,
    )


def _format_value(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_summary(summary: RunSummary, stream: TextIO) -> None:
    for name in SUMMARY_FIELDS:
        stream.write(f"{name} = {_format_value(getattr(summary, name))}\n")


def read_summary(stream: TextIO) -> RunSummary:
    values = {}
    for line in stream:
        line = line.strip()
        if not line:
            continue
        key, _, value = line.partition('=')
        values[key.strip()] = value.strip()

    missing = [name for name in SUMMARY_FIELDS if name not in values]
    if missing:
        raise InvalidInputError(f"Summary is missing {', '.join(missing)}")

    return RunSummary(
        optimization_steps=int(values['optimization_steps']),
        final_cores=int(values['final_cores']),
        final_window_ce=_optional_float(values['final_window_ce']),
        converged=values['converged'] == 'true',
        core_hours=float(values['core_hours']),
        baseline_core_hours=float(values['baseline_core_hours']),
        restart_overhead_total=float(values['restart_overhead_total']),
    )
