"""
Sweep Orchestrator
Runs a scenario over the cartesian product of its sweep axes
"""

import itertools
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from loguru import logger
from tqdm import tqdm

from model_core.errors import ScenarioError
from reporting.report_writer import ReportWriter
from scenarios.scenario import Scenario
from scenarios.scenario_parser import ScenarioParser, set_field

from .scenario_runner import ScenarioRunner


class SweepOrchestrator:
    """Runs sweep points concurrently; each point writes into its own directory"""

    def __init__(
        self,
        output_dir: Union[str, Path],
        max_workers: Optional[int] = None,
        progress: bool = True
    ):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.max_workers = max_workers or int(os.getenv('MAX_SWEEP_WORKERS', '4'))
        self.progress = progress
        self.parser = ScenarioParser()

    def expand(self, scenario: Scenario) -> List[Tuple[Dict[str, float], Dict]]:
        """
        Build one raw config per grid point

        Field paths are checked here; each point is validated when it runs, so
        an out-of-range value fails only its own point.

        Args:
            scenario: Scenario carrying sweep axes

        Returns:
            (field values, config) pairs in axis-major order
        """
        if not scenario.sweep:
            raise ScenarioError("no sweep axes configured", "sweep.axes")

        base = scenario.to_config()
        base.pop('sweep', None)
        fields = [axis.field for axis in scenario.sweep]

        points = []
        for values in itertools.product(*(axis.values for axis in scenario.sweep)):
            config = base
            for field_path, value in zip(fields, values):
                config = set_field(config, field_path, value)
            points.append((dict(zip(fields, values)), config))
        logger.info(f"Sweep expanded to {len(points)} points over {len(fields)} axes")
        return points

    def run_sweep(self, scenario: Scenario) -> Path:
        """
        Run every sweep point and write the index

        Args:
            scenario: Scenario carrying sweep axes

        Returns:
            Path of sweep_index.csv
        """
        points = self.expand(scenario)
        rows: Dict[int, Dict] = {}

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_point = {
                executor.submit(self._run_point, i, point): (i, point[0])
                for i, point in enumerate(points)
            }
            for future in tqdm(
                as_completed(future_to_point),
                total=len(future_to_point),
                desc='Sweep',
                disable=not self.progress,
            ):
                i, values = future_to_point[future]
                try:
                    rows[i] = future.result()
                except Exception as e:
                    logger.error(f"Sweep point {i} failed: {e}")
                    rows[i] = self._row(i, values, status='failed', error=str(e))

        failed = sum(1 for row in rows.values() if row['status'] != 'ok')
        if failed:
            logger.warning(f"{failed} of {len(rows)} sweep points failed")
        return ReportWriter(self.output_dir).write_sweep_index([rows[i] for i in sorted(rows)])

    def _run_point(self, index: int, point: Tuple[Dict[str, float], Dict]) -> Dict:
        values, config = point
        summary, _ = ScenarioRunner(self.parser.parse_dict(config)).run(command='sweep')

        point_dir = self.output_dir / f"point_{index:04d}"
        ReportWriter(point_dir).write_summary(summary)

        endemic = summary.equilibria.endemic
        return self._row(
            index, values,
            R0=summary.equilibria.R0,
            Fbar=endemic.Fbar if endemic is not None else None,
            converged_to=summary.convergence.converged_to,
            summary=str(point_dir / 'summary.json'),
        )

    @staticmethod
    def _row(index: int, values: Dict[str, float], status: str = 'ok', error: str = '',
             R0=None, Fbar=None, converged_to=None, summary=None) -> Dict:
        return {
            'point': index,
            **values,
            'R0': R0,
            'Fbar': Fbar,
            'converged_to': converged_to,
            'status': status,
            'error': error,
            'summary': summary,
        }
