"""Orchestration package initialization"""

from .scenario_runner import ScenarioRunner, contradicts_theory, convergence_verdict
from .sweep_orchestrator import SweepOrchestrator

__all__ = ['ScenarioRunner', 'SweepOrchestrator', 'convergence_verdict', 'contradicts_theory']
