import logging

from sqlalchemy import select
from sqlalchemy.exc import IntegrityError, SQLAlchemyError

from models import SimulationRun, TraceEntry
from .data_manager_interface import RunArchiveInterface

logger = logging.getLogger(__name__)


class SQLiteDataManager(RunArchiveInterface):
    def __init__(self, session_factory):
        self.session = session_factory()

    def close(self):
        self.session.close()

    def _safe_query(self, query_func, error_message):
        """Helper to execute database read queries with generic error handling and logging."""
        try:
            return query_func()
        except SQLAlchemyError as e:
            logger.error(f"{error_message}: {str(e)}")
            self.session.rollback()
            raise
        except Exception as e:
            logger.error(f"{error_message}: {str(e)}")
            raise

    def _safe_transaction(self, transaction_func, success_message, error_message_base, integrity_error_message=None):
        """
        Helper to execute database write operations (add, delete) with generic error handling,
        commit, and rollback.
        """
        try:
            result = transaction_func()
            self.session.commit()
            logger.info(success_message)
            return result
        except IntegrityError as e:
            self.session.rollback()
            logger.error(f"Integrity error in {error_message_base}: {str(e)}")
            raise ValueError(
                integrity_error_message or f"An integrity issue occurred during {error_message_base}.")
        except SQLAlchemyError as e:
            self.session.rollback()
            logger.error(f"Database error in {error_message_base}: {str(e)}")
            raise
        except Exception as e:
            self.session.rollback()
            logger.error(f"Unexpected error in {error_message_base}: {str(e)}")
            raise

    def get_all_runs(self):
        """Get all archived runs, oldest first"""
        return self._safe_query(
            lambda: self.session.scalars(select(SimulationRun).order_by(SimulationRun.id)).all(),
            "Error fetching all runs")

    def get_runs_for_scenario(self, scenario_name):
        """Get the archived runs of one scenario"""
        if not scenario_name or not scenario_name.strip():
            return self.get_all_runs()
        return self._safe_query(
            lambda: self.session.scalars(
                select(SimulationRun)
                .where(SimulationRun.scenario_name == scenario_name.strip())
                .order_by(SimulationRun.id)).all(),
            "Error fetching runs for scenario")

    def get_run_by_id(self, run_id):
        if not run_id:
            raise ValueError("Run ID is required")
        return self._safe_query(lambda: self.session.get(SimulationRun, run_id),
                                "Error fetching run by ID")

    def get_run_records(self, run_id):
        """Get the trace entries of a run in recording order"""
        if not run_id:
            raise ValueError("Run ID is required")
        return self._safe_query(
            lambda: self.session.scalars(
                select(TraceEntry).where(TraceEntry.run_id == run_id).order_by(TraceEntry.id)).all(),
            "Error fetching trace entries for run")

    def add_run(self, run):
        """Archive a run together with its trace entries"""
        if not run or not getattr(run, 'scenario_name', None):
            raise ValueError("Invalid run object for addition.")

        def _add_run_op():
            self.session.add(run)
            return run

        return self._safe_transaction(
            _add_run_op,
            f"Run of scenario '{run.scenario_name}' archived with {len(run.records)} trace entries",
            "adding run",
        )

    def delete_run(self, run_id):
        """Delete a run and its trace entries"""
        if not run_id:
            raise ValueError("Run ID is required")

        run = self._safe_query(lambda: self.session.get(SimulationRun, run_id),
                               "Error retrieving run for deletion")
        if not run:
            logger.warning(f"Attempted to delete non-existent run with ID {run_id}")
            return False

        scenario_name = run.scenario_name

        def _delete_run_op():
            self.session.delete(run)
            return True

        return self._safe_transaction(
            _delete_run_op,
            f"Run {run_id} of scenario '{scenario_name}' deleted successfully",
            "deleting run",
        )
