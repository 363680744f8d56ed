"""
Oracle Orchestrator
Selects and runs the oracles that apply to a scenario
"""

import math
from typing import Callable, Dict, List

import numpy as np
from loguru import logger

from scenarios.scenario import Scenario

from .oracles import (
    OracleReport,
    closed_form_equilibrium_check,
    homogeneous_reduction_check,
    refinement_study,
)


class OracleOrchestrator:
    """Runs every applicable oracle; a failing oracle does not stop the batch"""

    def __init__(self):
        self.oracles: Dict[str, Callable[[Scenario], OracleReport]] = {
            'closed_form_equilibrium': closed_form_equilibrium_check,
            'homogeneous_reduction': homogeneous_reduction_check,
            'refinement_study': refinement_study,
        }

    def applicable(self, scenario: Scenario) -> List[str]:
        """Names of the oracles whose preconditions the scenario meets"""
        names = []
        if scenario.sigma.m <= 2:
            names.append('closed_form_equilibrium')
        if np.all(scenario.sigma.eta == 1.0):
            names.append('homogeneous_reduction')
        if scenario.run.refinement_study:
            names.append('refinement_study')
        return names

    def run_applicable(self, scenario: Scenario) -> List[OracleReport]:
        """
        Run the applicable oracles

        Args:
            scenario: Parsed scenario

        Returns:
            One report per oracle, failures recorded as failed reports
        """
        reports = []
        for name in self.applicable(scenario):
            logger.info(f"Running oracle: {name}")
            try:
                reports.append(self.oracles[name](scenario))
            except Exception as e:
                logger.error(f"Oracle {name} failed: {e}")
                reports.append(OracleReport(
                    name=name,
                    max_abs_err=math.inf,
                    tolerance=0.0,
                    passed=False,
                    details={'error': str(e)},
                ))
        return reports
