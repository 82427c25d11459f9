"""Energy-cost-aware global manager selection for geo-distributed analytics."""

from .cost import slot_cost, unit_costs
from .model import SlotObservation, SystemConfig, ValidationReport, Violation
from .queues import BacklogStats, advance_queues, backlog_stats, drift_constant, lyapunov
from .schedulers import DataScheduler, GMSAScheduler, RandomScheduler, make_scheduler
from .simulation import SimulationRecord, SweepResult, run_simulation, run_sweep
from .validation import validate_config, validate_observation

__version__ = "0.1.0"

__all__ = [
    "BacklogStats",
    "DataScheduler",
    "GMSAScheduler",
    "RandomScheduler",
    "SimulationRecord",
    "SlotObservation",
    "SweepResult",
    "SystemConfig",
    "ValidationReport",
    "Violation",
    "advance_queues",
    "backlog_stats",
    "drift_constant",
    "lyapunov",
    "make_scheduler",
    "run_simulation",
    "run_sweep",
    "slot_cost",
    "unit_costs",
    "validate_config",
    "validate_observation",
]
