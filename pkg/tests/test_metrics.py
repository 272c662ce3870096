import numpy as np
import pytest

from elastic.errors import DegenerateWindowError, InvalidInputError, InvalidMergeError
from elastic.metrics import compute_metrics, merge_windows
from models import ProcessTiming, TimingWindow

from conftest import balanced_window


def test_balanced_window_has_unit_load_balance():
    metrics = compute_metrics(balanced_window(4, work=9.0, comm=1.0))

    assert metrics.elapsed_time == pytest.approx(10.0)
    assert metrics.total_work == pytest.approx(36.0)
    assert metrics.ce == pytest.approx(0.9)
    assert metrics.lb == 1.0
    assert metrics.pe == pytest.approx(0.9)


def test_imbalanced_window():
    window = TimingWindow.from_pairs([(10.0, 0.0), (5.0, 5.0)])
    metrics = compute_metrics(window)

    assert metrics.ce == 1.0
    assert metrics.lb == pytest.approx(0.75)
    assert metrics.pe == pytest.approx(0.75)
    assert metrics.max_comm == 5.0


def test_single_process_without_communication():
    metrics = compute_metrics(TimingWindow.from_pairs([(3.0, 0.0)]))
    assert (metrics.ce, metrics.lb, metrics.pe) == (1.0, 1.0, 1.0)


def test_window_without_work_is_degenerate():
    with pytest.raises(DegenerateWindowError):
        compute_metrics(TimingWindow.zeros(8))
    with pytest.raises(DegenerateWindowError):
        compute_metrics(TimingWindow.from_pairs([(0.0, 2.0), (0.0, 1.0)]))


def test_window_without_processes_is_rejected():
    with pytest.raises(InvalidInputError):
        compute_metrics(TimingWindow(np.array([]), np.array([])))


def test_negative_timing_is_rejected():
    with pytest.raises(InvalidInputError):
        ProcessTiming(-1.0, 0.0)
    with pytest.raises(InvalidInputError):
        TimingWindow(np.array([1.0, -0.5]), np.array([0.0, 0.0]))


def test_metric_identities_on_random_windows():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        processes = int(rng.integers(2, 257))
        work = rng.uniform(0.01, 10.0, processes)
        comm = rng.uniform(0.0, 5.0, processes)
        metrics = compute_metrics(TimingWindow(work, comm))

        assert metrics.pe == pytest.approx(metrics.ce * metrics.lb, rel=1e-12)
        for value in (metrics.ce, metrics.lb, metrics.pe):
            assert 0.0 < value <= 1.0
        assert metrics.elapsed_time >= metrics.max_work


def test_merge_sums_adjacent_windows():
    first = balanced_window(3, work=2.0, comm=1.0, step_span=(0, 1))
    second = balanced_window(3, work=4.0, comm=0.5, step_span=(2, 2))

    merged = merge_windows(first, second)

    assert merged.step_span == (0, 2)
    assert merged.step_count == 3
    np.testing.assert_allclose(merged.work_time, [6.0, 6.0, 6.0])
    np.testing.assert_allclose(merged.comm_time, [1.5, 1.5, 1.5])
    assert merge_windows(second, first) == merged


def test_merge_rejects_different_core_counts():
    with pytest.raises(InvalidMergeError):
        merge_windows(balanced_window(3, 1.0, 1.0, (0, 0)), balanced_window(4, 1.0, 1.0, (1, 1)))


def test_merge_rejects_gaps_and_overlaps():
    with pytest.raises(InvalidMergeError):
        merge_windows(balanced_window(2, 1.0, 1.0, (0, 0)), balanced_window(2, 1.0, 1.0, (2, 2)))
    with pytest.raises(InvalidMergeError):
        merge_windows(balanced_window(2, 1.0, 1.0, (0, 3)), balanced_window(2, 1.0, 1.0, (3, 4)))


def test_window_arrays_are_read_only_copies():
    work = np.array([1.0, 2.0])
    window = TimingWindow(work, np.zeros(2))
    work[0] = 99.0

    assert window.work_time[0] == 1.0
    with pytest.raises(ValueError):
        window.work_time[0] = 5.0


def test_metrics_do_not_depend_on_the_time_unit():
    rng = np.random.default_rng(7)
    for factor in (1e-3, 0.5, 3.0, 3600.0):
        window = TimingWindow(rng.uniform(0.01, 10.0, 40), rng.uniform(0.0, 5.0, 40))
        original, scaled = compute_metrics(window), compute_metrics(window.scaled(factor))

        assert scaled.ce == pytest.approx(original.ce, rel=1e-12)
        assert scaled.lb == pytest.approx(original.lb, rel=1e-12)
        assert scaled.pe == pytest.approx(original.pe, rel=1e-12)
        assert scaled.elapsed_time == pytest.approx(original.elapsed_time * factor, rel=1e-12)


def test_merged_metrics_equal_metrics_of_summed_timings():
    rng = np.random.default_rng(11)
    first = TimingWindow(rng.uniform(0.1, 5.0, 24), rng.uniform(0.0, 2.0, 24), (0, 2))
    second = TimingWindow(rng.uniform(0.1, 5.0, 24), rng.uniform(0.0, 2.0, 24), (3, 3))

    summed = TimingWindow(first.work_time + second.work_time, first.comm_time + second.comm_time, (0, 3))
    assert compute_metrics(merge_windows(first, second)) == compute_metrics(summed)


def test_per_process_view_matches_the_arrays():
    window = TimingWindow.from_pairs([(1.0, 0.5), (2.0, 0.25)], step_span=(4, 6))

    assert window.per_process == [ProcessTiming(1.0, 0.5), ProcessTiming(2.0, 0.25)]
    assert TimingWindow.from_timings(window.per_process, window.step_span) == window
