"""Scenarios package initialization"""

from .scenario import RunSettings, Scenario, SweepAxis, Tolerances
from .scenario_parser import SCENARIO_SCHEMA, ScenarioParser, set_field

__all__ = [
    'Scenario', 'RunSettings', 'Tolerances', 'SweepAxis',
    'ScenarioParser', 'SCENARIO_SCHEMA', 'set_field',
]
