from pathlib import Path

import numpy as np
import pytest

from database_config import create_session_factory
from data_managers import SQLiteDataManager
from models import ClampPolicy, ControllerConfig, TargetRange, TimingWindow
from services import SimulationService

SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'scenarios'


def scenario_path(name):
    return SCENARIO_DIR / f'{name}.ini'


def load(name, seed=None):
    success, scenario = SimulationService().load_scenario(scenario_path(name), seed=seed)
    assert success, scenario
    return scenario


def balanced_window(processes, work, comm, step_span=(0, 0)):
    return TimingWindow(np.full(processes, float(work)), np.full(processes, float(comm)), step_span)


@pytest.fixture
def controller_config():
    return ControllerConfig(
        target_range=TargetRange(0.90, 0.92),
        averaging_period=3,
        clamp=ClampPolicy(rate_of_change=2.0, min_cores=15, max_cores=240),
        initial_cores=15,
        starting_step=2,
        total_steps=50,
    )


@pytest.fixture
def data_manager():
    manager = SQLiteDataManager(create_session_factory('sqlite:///:memory:'))
    yield manager
    manager.close()
