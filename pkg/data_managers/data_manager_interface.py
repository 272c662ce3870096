from abc import ABC, abstractmethod

class RunArchiveInterface(ABC):

    @abstractmethod
    def get_all_runs(self):
        pass

    @abstractmethod
    def get_runs_for_scenario(self, scenario_name):
        pass

    @abstractmethod
    def get_run_by_id(self, run_id):
        pass

    @abstractmethod
    def get_run_records(self, run_id):
        pass

    @abstractmethod
    def add_run(self, run):
        pass

    @abstractmethod
    def delete_run(self, run_id):
        pass
