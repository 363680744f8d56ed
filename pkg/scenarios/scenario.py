"""
Scenario
A complete, validated description of one model run
"""

from dataclasses import asdict, dataclass
from typing import Dict, Tuple

from discretization.kernel_families import GridSpec, KernelFamily, sample_kernel
from equilibria.equilibrium_solver import EquilibriumSet, compute_equilibria
from model_core.domain import InfectivityKernel, ModelParams, SigmaGrid
from simulator.history import InitialCondition, InitialProfile, build_initial_condition


@dataclass(frozen=True)
class RunSettings:
    """Time stepping and observer toggles"""

    delta: float
    t_end: float
    corrector: bool = True
    record_U: bool = True
    record_W: bool = True
    monitor: bool = True
    refinement_study: bool = False


@dataclass(frozen=True)
class Tolerances:
    """Tolerance constants of the monitor, the equilibrium solver and the verdicts"""

    c_tol: float = 1.0
    solver_rtol: float = 1e-12
    solver_max_iter: int = 200
    identity_tol: float = 1e-9
    convergence: float = 1e-4


@dataclass(frozen=True)
class SweepAxis:
    """One swept scalar field, addressed by dotted path"""

    field: str
    values: Tuple[float, ...]


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario config"""

    sigma: SigmaGrid
    params: ModelParams
    kernel: KernelFamily
    initial: InitialProfile
    run: RunSettings
    tolerances: Tolerances = Tolerances()
    sweep: Tuple[SweepAxis, ...] = ()

    def sampled_kernel(self) -> InfectivityKernel:
        return sample_kernel(self.kernel, GridSpec(self.run.delta))

    def initial_condition(self, kernel: InfectivityKernel) -> InitialCondition:
        return build_initial_condition(self.initial, self.sigma, self.params, kernel)

    def equilibria(self, kernel: InfectivityKernel) -> EquilibriumSet:
        return compute_equilibria(
            self.sigma,
            self.params,
            kernel,
            rtol=self.tolerances.solver_rtol,
            max_iter=self.tolerances.solver_max_iter,
            identity_tol=self.tolerances.identity_tol,
        )

    def to_config(self) -> Dict:
        """Serialize to the config layout accepted by ScenarioParser"""
        config = {
            'sigma': {
                'classes': [
                    {'weight': c.weight, 'eta': c.eta, 'lambda': c.lam}
                    for c in self.sigma.classes
                ]
            },
            'params': {'mu': self.params.mu},
            'kernel': self.kernel.to_config(),
            'initial': self.initial.to_config(),
            'run': asdict(self.run),
            'tolerances': asdict(self.tolerances),
        }
        if self.sweep:
            config['sweep'] = {
                'axes': [{'field': a.field, 'values': list(a.values)} for a in self.sweep]
            }
        return config
