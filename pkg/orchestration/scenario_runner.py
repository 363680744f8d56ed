"""
Scenario Runner
Bodies of the equilibrium, run and certify commands
"""

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from equilibria.equilibrium_solver import EquilibriumSet
from lyapunov.monitor import LyapunovObserver, MonitorReport, monotonicity_monitor
from reporting.summary import NOT_CONVERGED, P0, PBAR, ConvergenceVerdict, SummaryReport
from scenarios.scenario import Scenario
from simulator.renewal_stepper import Region, TrajectoryRecord, classify_initial, simulate
from verification.oracle_orchestrator import OracleOrchestrator


def convergence_verdict(
    record: TrajectoryRecord, eq: EquilibriumSet, tolerance: float
) -> ConvergenceVerdict:
    """
    Classify the state at t_end by its relative distance to P⁰ and P̄

    Args:
        record: Finished trajectory
        eq: Equilibria of the scenario
        tolerance: Largest distance counted as converged

    Returns:
        ConvergenceVerdict naming the closest equilibrium within tolerance
    """
    S = record.S[-1]
    F = float(record.F[-1])

    distance_P0 = max(float(np.max(np.abs(S - eq.S0) / eq.S0)), F)
    candidates = [(distance_P0, P0)]

    distance_Pbar = None
    if eq.endemic is not None:
        Sbar = eq.endemic.Sbar
        Fbar = eq.endemic.Fbar
        distance_Pbar = max(float(np.max(np.abs(S - Sbar) / Sbar)), abs(F - Fbar) / Fbar)
        candidates.append((distance_Pbar, PBAR))

    within = [c for c in candidates if c[0] <= tolerance]
    converged_to = min(within)[1] if within else NOT_CONVERGED
    if converged_to == NOT_CONVERGED:
        logger.warning(
            f"Not converged at t={record.times[-1]:g}: distance to P0 {distance_P0:.3e}"
            + (f", to Pbar {distance_Pbar:.3e}" if distance_Pbar is not None else "")
        )

    return ConvergenceVerdict(
        t_end=float(record.times[-1]),
        distance_P0=distance_P0,
        distance_Pbar=distance_Pbar,
        tolerance=tolerance,
        converged_to=converged_to,
    )


def contradicts_theory(verdict: ConvergenceVerdict, R0: float, region: Region) -> bool:
    """True when the verdict names the equilibrium the stability results rule out"""
    attracts_Pbar = R0 > 1 and region == Region.INTERIOR
    if verdict.converged_to == P0:
        return attracts_Pbar
    if verdict.converged_to == PBAR:
        return not attracts_Pbar
    return False


class ScenarioRunner:
    """Runs one scenario through equilibrium analysis, simulation and certification"""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.kernel = scenario.sampled_kernel()
        self._equilibria: Optional[EquilibriumSet] = None

    def analyze_equilibria(self) -> EquilibriumSet:
        if self._equilibria is None:
            self._equilibria = self.scenario.equilibria(self.kernel)
            logger.info(f"R0 = {self._equilibria.R0:.10g}")
        return self._equilibria

    def equilibrium(self) -> SummaryReport:
        """Equilibrium analysis only"""
        return SummaryReport(
            command='equilibrium',
            equilibria=self.analyze_equilibria(),
            scenario=self.scenario.to_config(),
        )

    def classify(self) -> Region:
        ic = self.scenario.initial_condition(self.kernel)
        return classify_initial(ic, self.scenario.sigma, self.kernel)

    def run(self, command: str = 'run') -> Tuple[SummaryReport, TrajectoryRecord]:
        """
        Simulate the scenario with the configured observers

        Returns:
            Summary with classification, convergence verdict and monitor results,
            and the trajectory record
        """
        scenario = self.scenario
        settings = scenario.run
        eq = self.analyze_equilibria()

        ic = scenario.initial_condition(self.kernel)
        region = classify_initial(ic, scenario.sigma, self.kernel)
        logger.info(f"Initial history classified as {region.value}")

        observers = []
        if settings.record_U or settings.record_W or settings.monitor:
            observers.append(LyapunovObserver(
                eq, scenario.sigma, self.kernel, record_W=settings.record_W
            ))

        record = simulate(
            ic, scenario.sigma, scenario.params, self.kernel, settings.t_end,
            observers=observers, corrector=settings.corrector,
        )
        verdict = convergence_verdict(record, eq, scenario.tolerances.convergence)

        monitor = None
        if settings.monitor:
            monitor = self._monitor(record, eq.R0, region)

        summary = SummaryReport(
            command=command,
            equilibria=eq,
            scenario=scenario.to_config(),
            classification=region.value,
            convergence=verdict,
            monitor=monitor,
            run={
                'delta': self.kernel.delta,
                'K': self.kernel.K,
                't_end': float(record.times[-1]),
                'steps': int(record.times.size - 1),
                'warm_time': record.warm_time,
                'F_final': float(record.F[-1]),
                'S_final': record.S[-1].tolist(),
            },
        )
        return summary, record

    def _monitor(
        self, record: TrajectoryRecord, R0: float, region: Region
    ) -> Optional[MonitorReport]:
        samples = record.lyapunov_samples
        if len(samples) < 2:
            logger.warning(
                f"Only {len(samples)} warm samples; run past t = τ̄ + Δ to monitor"
            )
            return None
        check_U = bool(R0 <= 1 or region == Region.BOUNDARY)
        return monotonicity_monitor(
            samples, record.delta, self.scenario.tolerances.c_tol, check_U=check_U
        )

    def certify(self) -> Tuple[SummaryReport, TrajectoryRecord]:
        """
        Run with every monitor on plus the applicable oracles

        The certificate holds when the monitor passed, every oracle passed and
        the convergence verdict does not contradict the stability results.
        """
        settings = replace(self.scenario.run, record_U=True, record_W=True, monitor=True)
        runner = ScenarioRunner(replace(self.scenario, run=settings))
        runner._equilibria = self._equilibria
        summary, record = runner.run(command='certify')
        summary.oracles = OracleOrchestrator().run_applicable(runner.scenario)

        failures = []
        if summary.monitor is None:
            failures.append("too few warm samples for the Lyapunov monitor")
        elif not summary.monitor.passed:
            failures.append("Lyapunov monitor reported violations")
        for report in summary.oracles:
            if not report.passed:
                failures.append(f"oracle {report.name} failed")
        if contradicts_theory(summary.convergence, summary.equilibria.R0,
                              Region(summary.classification)):
            failures.append(
                f"converged to {summary.convergence.converged_to}, which contradicts "
                f"R0 = {summary.equilibria.R0:.6g} from a {summary.classification} start"
            )

        summary.failures = failures
        summary.certified = not failures
        if summary.certified:
            logger.info("Certification passed")
        else:
            for failure in failures:
                logger.warning(f"Certification failure: {failure}")
        return summary, record
