"""
Monotonicity monitor
Records Lyapunov samples along a simulation and checks the discrete decrease
of U and W against a C_tol·Δ² tolerance model
"""

from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from equilibria.equilibrium_solver import EquilibriumSet
from model_core.domain import InfectivityKernel, SigmaGrid
from model_core.errors import PreconditionError
from model_core.functions import build_lyapunov_kernels
from simulator.history import HistoryState
from simulator.observers import SimulationObserver

from .functionals import (
    LyapunovSample,
    eval_dU_analytic,
    eval_dW_bound,
    eval_G,
    eval_U,
    eval_W,
    incidence_balance,
    jensen_excess,
)


class LyapunovObserver(SimulationObserver):
    """Evaluates U (and W on interior states when an endemic equilibrium exists) once warm"""

    def __init__(
        self,
        eq: EquilibriumSet,
        grid: SigmaGrid,
        kernel: InfectivityKernel,
        record_W: bool = True
    ):
        self.eq = eq
        self.grid = grid
        self.kernel = kernel
        etabar = eq.endemic.etabar if eq.endemic is not None else None
        self.kernels = build_lyapunov_kernels(kernel, eq.eta0, etabar)
        self.record_W = record_W and eq.endemic is not None
        self.samples: List[LyapunovSample] = []
        self.skipped_W = 0

    def observe(self, state: HistoryState) -> None:
        if not state.warm:
            return

        W = bound = excess = balance = None
        if self.record_W:
            if np.all(state.F_hist > 0):
                W = eval_W(state, self.eq, self.kernels, self.grid)
                bound = eval_dW_bound(state, self.eq, self.grid, self.kernel)
                excess = jensen_excess(state, self.eq, self.kernel, self.grid)
                balance = incidence_balance(state, self.eq, self.kernel, self.grid)
            else:
                if self.skipped_W == 0:
                    logger.warning(f"Boundary state at t={state.t_now:g}; W not evaluated")
                self.skipped_W += 1

        self.samples.append(LyapunovSample(
            t=state.t_now,
            U=eval_U(state, self.eq, self.kernels, self.grid),
            dU_analytic=eval_dU_analytic(state, self.eq, self.grid),
            G=eval_G(state, self.kernel, self.grid),
            W=W,
            dW_bound=bound,
            jensen_excess=excess,
            incidence_balance=balance,
        ))

    def finalize(self, record) -> None:
        record.lyapunov_samples = list(self.samples)


@dataclass
class MonitorReport:
    """Outcome of the discrete monotonicity checks"""

    samples: int
    pairs: int
    tolerance: float
    check_U: bool
    u_violations: int = 0
    max_fd_U: Optional[float] = None
    max_U_residual: Optional[float] = None
    w_pairs: int = 0
    w_violations: int = 0
    max_W_excess: Optional[float] = None
    positive_dW_bounds: int = 0
    jensen_violations: int = 0
    max_jensen_excess: Optional[float] = None
    max_abs_incidence_balance: Optional[float] = None

    @property
    def passed(self) -> bool:
        return (
            self.u_violations == 0
            and self.w_violations == 0
            and self.positive_dW_bounds == 0
            and self.jensen_violations == 0
        )

    def to_dict(self) -> Dict:
        result = asdict(self)
        result['passed'] = self.passed
        return result


def _running_max(current: Optional[float], value: float) -> float:
    return value if current is None else max(current, value)


def monotonicity_monitor(
    samples: Sequence[LyapunovSample],
    delta: float,
    c_tol: float,
    check_U: bool = True
) -> MonitorReport:
    """
    Check finite-difference decrease of U and W along consecutive samples

    FD derivatives over each step are compared with the average of the analytic
    derivative (U) or of the bound (W) at the two ends of the step. The largest
    |incidence balance| is reported alongside as a diagnostic.

    Args:
        samples: Lyapunov samples, one per grid step
        delta: Grid step Δ
        c_tol: Tolerance constant; violations exceed c_tol·Δ²
        check_U: Count U increases as violations (U is a Lyapunov functional
            only for R0 <= 1 or on the boundary)

    Returns:
        MonitorReport
    """
    if len(samples) < 2:
        raise PreconditionError(f"monitor needs at least two samples, got {len(samples)}")

    tolerance = c_tol * delta ** 2
    report = MonitorReport(samples=len(samples), pairs=0, tolerance=tolerance, check_U=check_U)

    for prev, curr in zip(samples[:-1], samples[1:]):
        if abs((curr.t - prev.t) - delta) > 1e-9 * delta:
            continue
        report.pairs += 1

        fd_U = (curr.U - prev.U) / delta
        report.max_fd_U = _running_max(report.max_fd_U, fd_U)
        residual = abs(fd_U - 0.5 * (prev.dU_analytic + curr.dU_analytic))
        report.max_U_residual = _running_max(report.max_U_residual, residual)
        if check_U and fd_U > tolerance:
            report.u_violations += 1

        if prev.W is not None and curr.W is not None:
            report.w_pairs += 1
            fd_W = (curr.W - prev.W) / delta
            excess = fd_W - 0.5 * (prev.dW_bound + curr.dW_bound)
            report.max_W_excess = _running_max(report.max_W_excess, excess)
            if excess > tolerance:
                report.w_violations += 1

    for sample in samples:
        if sample.dW_bound is not None and sample.dW_bound > 0:
            report.positive_dW_bounds += 1
        if sample.jensen_excess is not None:
            report.max_jensen_excess = _running_max(report.max_jensen_excess, sample.jensen_excess)
            if sample.jensen_excess > tolerance:
                report.jensen_violations += 1
        if sample.incidence_balance is not None:
            report.max_abs_incidence_balance = _running_max(
                report.max_abs_incidence_balance, abs(sample.incidence_balance)
            )

    if report.passed:
        logger.info(f"Lyapunov monitor passed over {report.pairs} steps (tol={tolerance:.3g})")
    else:
        logger.warning(
            f"Lyapunov monitor violations: U={report.u_violations}, W={report.w_violations}, "
            f"positive bounds={report.positive_dW_bounds}, Jensen={report.jensen_violations}"
        )
    return report
