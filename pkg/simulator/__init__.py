"""Simulator package initialization"""

from .history import HistoryState, InitialCondition, InitialProfile, build_initial_condition
from .observers import SimulationObserver
from .renewal_stepper import (
    Region,
    TrajectoryRecord,
    classify_initial,
    exponential_relaxation,
    force_of_infection,
    simulate,
    step,
)

__all__ = [
    'HistoryState', 'InitialCondition', 'InitialProfile', 'build_initial_condition',
    'SimulationObserver', 'Region', 'TrajectoryRecord',
    'force_of_infection', 'exponential_relaxation', 'step', 'classify_initial', 'simulate',
]
