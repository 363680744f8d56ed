"""
Summary
Data carried by summary.json: equilibria, classification, convergence
verdict, monitor and oracle results
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from equilibria.equilibrium_solver import EquilibriumSet
from lyapunov.monitor import MonitorReport
from verification.oracles import OracleReport

P0 = 'P0'
PBAR = 'Pbar'
NOT_CONVERGED = 'not_converged'


@dataclass
class ConvergenceVerdict:
    """Relative distances of the state at t_end to P⁰ and P̄"""

    t_end: float
    distance_P0: float
    distance_Pbar: Optional[float]
    tolerance: float
    converged_to: str

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class SummaryReport:
    """Everything one command learned about a scenario"""

    command: str
    equilibria: EquilibriumSet
    scenario: Dict
    classification: Optional[str] = None
    convergence: Optional[ConvergenceVerdict] = None
    monitor: Optional[MonitorReport] = None
    oracles: List[OracleReport] = field(default_factory=list)
    run: Dict = field(default_factory=dict)
    certified: Optional[bool] = None
    failures: List[str] = field(default_factory=list)

    @property
    def has_endemic(self) -> bool:
        return self.equilibria.endemic is not None

    def to_dict(self) -> Dict:
        result = {
            'command': self.command,
            'R0': self.equilibria.R0,
            'equilibria': self.equilibria.to_dict(),
        }
        if self.classification is not None:
            result['classification'] = self.classification
        if self.convergence is not None:
            result['convergence'] = self.convergence.to_dict()
        if self.monitor is not None:
            result['monitor'] = self.monitor.to_dict()
        if self.oracles:
            result['oracles'] = [report.to_dict() for report in self.oracles]
        if self.run:
            result['run'] = self.run
        if self.certified is not None:
            result['certified'] = self.certified
            result['failures'] = self.failures
        result['scenario'] = self.scenario
        return result
