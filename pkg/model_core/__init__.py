"""Model core package initialization"""

from .domain import InfectivityKernel, LyapunovKernels, ModelParams, SigmaClass, SigmaGrid
from .errors import (
    ConsistencyError,
    DomainError,
    KernelError,
    NumericalError,
    PreconditionError,
    RenewalModelError,
    ScenarioError,
    SimulationError,
    SolverError,
    StepSizeError,
)
from .functions import build_lyapunov_kernels, g, tail_integrals

__all__ = [
    'SigmaClass', 'SigmaGrid', 'ModelParams', 'InfectivityKernel', 'LyapunovKernels',
    'g', 'build_lyapunov_kernels', 'tail_integrals',
    'RenewalModelError', 'ScenarioError', 'KernelError', 'PreconditionError',
    'NumericalError', 'DomainError', 'StepSizeError', 'SolverError',
    'ConsistencyError', 'SimulationError',
]
