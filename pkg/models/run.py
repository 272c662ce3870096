from sqlalchemy import Boolean, Column, Float, ForeignKey, Integer, String
from sqlalchemy.orm import relationship

from database_config import Base


class SimulationRun(Base):
    __tablename__ = 'runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    scenario_name = Column(String(60), nullable=False)
    seed = Column(Integer, nullable=False)
    optimization_steps = Column(Integer, nullable=False)
    final_cores = Column(Integer, nullable=False)
    final_window_ce = Column(Float)
    converged = Column(Boolean, nullable=False)
    core_hours = Column(Float, nullable=False)
    baseline_core_hours = Column(Float, nullable=False)
    restart_overhead_total = Column(Float, nullable=False)

    records = relationship('TraceEntry', backref='run', lazy=True,
                           cascade='all, delete-orphan', order_by='TraceEntry.id')


class TraceEntry(Base):
    __tablename__ = 'trace_entries'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('runs.id'), nullable=False)
    step = Column(Integer, nullable=False)
    simulated_time = Column(Float, nullable=False)
    cores = Column(Integer, nullable=False)
    instantaneous_ce = Column(Float)
    window_ce = Column(Float)
    lb = Column(Float)
    pe = Column(Float)
    phase = Column(String(20), nullable=False)
    event = Column(String(20))
