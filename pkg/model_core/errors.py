"""
Error types
Exception hierarchy shared by the model, solver, simulator and CLI layers
"""

from typing import Optional


class RenewalModelError(Exception):
    """Base class for every error raised by this package"""


class ScenarioError(RenewalModelError, ValueError):
    """Invalid user input: config files, sweep axes, overrides"""

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)


class KernelError(ScenarioError):
    """Kernel family or sampled kernel violates its invariants"""


class PreconditionError(RenewalModelError, ValueError):
    """Operation invoked on a state outside its precondition"""


class NumericalError(RenewalModelError, ArithmeticError):
    """Base class for failures of the numerical machinery"""


class DomainError(NumericalError):
    """Argument left the admissible region (g of a non-positive value, W on the boundary)"""


class StepSizeError(NumericalError):
    """Implicit endpoint weight is not a contraction; Δ must be reduced"""


class SolverError(NumericalError):
    """Root bracketing or bisection failed"""


class ConsistencyError(NumericalError):
    """A computed equilibrium violates an identity it must satisfy"""


class SimulationError(NumericalError):
    """Numerical failure inside a time-stepping loop"""

    def __init__(self, message: str, t: float):
        self.t = t
        super().__init__(f"t={t:.10g}: {message}")
