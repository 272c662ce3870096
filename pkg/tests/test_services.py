from dataclasses import replace

from elastic.trace import read_summary, read_trace
from services import RunHistoryService, SimulationService

from conftest import load, scenario_path


def test_load_scenario_reports_bad_files(tmp_path):
    service = SimulationService()

    success, message = service.load_scenario(tmp_path / 'missing.ini')
    assert not success
    assert 'Cannot read scenario' in message

    broken = tmp_path / 'broken.ini'
    broken.write_text('[controller]\nce_min = 0.9\n')
    success, message = service.load_scenario(broken)
    assert not success
    assert message == 'workload: section is missing'


def test_load_scenario_uses_file_stem_and_seed(tmp_path):
    text = scenario_path('test1').read_text().replace('name = test1\n', '')
    path = tmp_path / 'growth.ini'
    path.write_text(text)

    success, scenario = SimulationService().load_scenario(path, seed=5)
    assert success, scenario
    assert scenario.name == 'growth'
    assert scenario.workload.rng_seed == 5
    assert scenario.cluster.rng_seed == 5


def test_run_writes_trace_and_summary(tmp_path):
    trace_path, summary_path = tmp_path / 'trace.csv', tmp_path / 'summary.txt'

    success, result = SimulationService().run_scenario(load('test1'), trace_path=trace_path, summary_path=summary_path)
    assert success, result

    with open(trace_path, newline='') as stream:
        assert read_trace(stream) == result.records
    with open(summary_path) as stream:
        assert read_summary(stream) == result.summary


def test_run_is_archived(data_manager):
    success, result = SimulationService(data_manager).run_scenario(load('test2'))
    assert success, result

    runs = data_manager.get_all_runs()
    assert len(runs) == 1
    run = runs[0]
    assert run.scenario_name == 'test2'
    assert run.seed == 12
    assert run.final_cores == result.summary.final_cores
    assert run.converged == result.summary.converged
    assert len(data_manager.get_run_records(run.id)) == len(result.records)


def test_run_failure_is_reported(tmp_path):
    success, message = SimulationService().run_scenario(load('test1'), trace_path=tmp_path / 'no' / 'trace.csv')
    assert not success
    assert message.startswith('I/O error')


def test_sweep_with_default_anchors():
    success, rows = SimulationService().sweep(load('test1'), [15, 30, 45, 60, 90], steps_per_point=5,
                                              use_noiseless=True)
    assert success, rows
    assert [row.cores for row in rows] == [15, 30, 45, 60, 90]
    assert list(rows[0].predictions) == [15, 45, 90]

    by_cores = {row.cores: row for row in rows}
    for anchor in (15, 45, 90):
        assert by_cores[anchor].predictions[anchor] == by_cores[anchor].metrics.ce
    assert all(a.metrics.ce > b.metrics.ce for a, b in zip(rows, rows[1:]))


def test_sweep_without_communication():
    scenario = load('test1')
    scenario = replace(scenario, workload=replace(scenario.workload, comm_base=0.0))

    success, rows = SimulationService().sweep(scenario, [15, 30], steps_per_point=2, anchors=[30])
    assert success, rows
    assert [row.metrics.ce for row in rows] == [1.0, 1.0]
    assert rows[0].predictions == {30: None}


def test_sweep_rejects_unknown_anchor():
    success, message = SimulationService().sweep(load('test1'), [15, 30], anchors=[60])
    assert not success
    assert 'Anchors [60]' in message


def test_admissible_cores_match_target_range():
    scenario = load('test1')
    admissible = SimulationService().admissible_cores(scenario)

    assert admissible
    assert admissible == list(range(admissible[0], admissible[-1] + 1))
    assert 15 not in admissible and 240 not in admissible


def test_history_service(data_manager):
    simulation = SimulationService(data_manager)
    for name in ('test1', 'test2'):
        simulation.run_scenario(load(name))

    history = RunHistoryService(data_manager)
    assert len(history.get_all_runs()) == 2
    assert [run.scenario_name for run in history.get_all_runs('test2')] == ['test2']

    run_id = history.get_all_runs('test1')[0].id
    assert history.delete_run(run_id) == (True, 'test1')
    assert history.get_run_by_id(run_id) is None
    assert history.delete_run(run_id) == (False, 'Run not found.')


def test_load_scenario_keeps_percent_signs(tmp_path):
    path = tmp_path / 'percent.ini'
    path.write_text(scenario_path('test1').read_text().replace(
        'description = Implicit scheme growing from one node', 'description = grows to 400% of one node'))

    success, scenario = SimulationService().load_scenario(path)
    assert success, scenario
    assert scenario.description == 'grows to 400% of one node'
