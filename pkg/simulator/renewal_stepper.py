"""
Renewal stepper
Integrating-factor / convolution-quadrature time stepping of the
variable-susceptibility renewal system
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from model_core.domain import InfectivityKernel, ModelParams, SigmaGrid
from model_core.errors import NumericalError, PreconditionError, SimulationError, StepSizeError

from .history import HistoryState, InitialCondition
from .observers import SimulationObserver


class Region(str, Enum):
    """Phase-space region of an initial history"""

    INTERIOR = 'Interior'
    BOUNDARY = 'Boundary'


def force_of_infection(
    history: HistoryState,
    grid: SigmaGrid,
    kernel: InfectivityKernel,
    S_now: np.ndarray
) -> float:
    """
    Solve the renewal equation for the force of infection at slot 0

    Slots 1..K of `history` are the past; the F value stored in slot 0 is
    ignored. The τ = 0 trapezoid node carries the unknown itself, so
    F = b + c·F is solved exactly as F = b / (1 - c).

    Args:
        history: Window whose slot 0 is the time level being computed
        grid: Susceptibility classes
        kernel: Sampled infectivity kernel
        S_now: Susceptibles per class at that time level

    Returns:
        F at slot 0
    """
    weighted_A = kernel.weighted_samples
    past_incidence = history.F_hist[1:] * (history.S_hist[1:] @ grid.weighted_eta)
    b = float(np.dot(weighted_A[1:], past_incidence))
    c = float(weighted_A[0] * np.dot(grid.weighted_eta, S_now))
    if c >= 1.0:
        raise StepSizeError(
            f"implicit endpoint weight {c:.6g} >= 1; reduce the grid step (delta={kernel.delta})"
        )
    return b / (1.0 - c)


def exponential_relaxation(
    S: np.ndarray,
    grid: SigmaGrid,
    mu: float,
    F: float,
    delta: float
) -> np.ndarray:
    """Exact step of S' = λ - (μ + ηF)S over Δ with F held constant"""
    rate = mu + grid.eta * F
    target = grid.lam / rate
    return target + (S - target) * np.exp(-rate * delta)


def _advance(history: HistoryState, S_new: np.ndarray) -> HistoryState:
    """Shift the window by one slot; slot 0 gets S_new and a placeholder F"""
    S_hist = np.concatenate([S_new[np.newaxis, :], history.S_hist[:-1]])
    F_hist = np.concatenate([[0.0], history.F_hist[:-1]])
    return HistoryState(
        t_now=history.t_now, S_hist=S_hist, F_hist=F_hist,
        warm=history.warm, steps=history.steps
    )


def step(
    history: HistoryState,
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel,
    corrector: bool = True
) -> HistoryState:
    """
    Advance the state by one grid step Δ

    Predictor: integrating-factor step of S with F frozen at F(t), then
    F(t+Δ) from the renewal equation. Corrector: re-step S with the averaged
    force (F(t) + F(t+Δ))/2 and recompute F(t+Δ).
    """
    delta = kernel.delta
    F_t = history.F_now
    S_t = history.S_now

    S_new = exponential_relaxation(S_t, grid, params.mu, F_t, delta)
    F_new = force_of_infection(_advance(history, S_new), grid, kernel, S_new)

    if corrector:
        S_new = exponential_relaxation(S_t, grid, params.mu, 0.5 * (F_t + F_new), delta)
        F_new = force_of_infection(_advance(history, S_new), grid, kernel, S_new)

    steps = history.steps + 1
    return HistoryState(
        t_now=steps * delta,
        S_hist=np.concatenate([S_new[np.newaxis, :], history.S_hist[:-1]]),
        F_hist=np.concatenate([[F_new], history.F_hist[:-1]]),
        warm=steps >= kernel.K,
        steps=steps,
    )


def classify_initial(ic: InitialCondition, grid: SigmaGrid, kernel: InfectivityKernel) -> Region:
    """
    Interior iff some grid shift a makes Σ_k c_k A(kΔ + a) η F S over the initial slots positive
    """
    A = kernel.samples
    K = kernel.K
    incidence = kernel.weights * ic.F_init * (ic.S_init @ grid.weighted_eta)

    for shift in range(K + 1):
        if np.dot(A[shift:], incidence[:K + 1 - shift]) > 0:
            return Region.INTERIOR
    return Region.BOUNDARY


@dataclass
class TrajectoryRecord:
    """Time series of one simulation plus observer diagnostics"""

    times: np.ndarray
    F: np.ndarray
    S: np.ndarray
    delta: float
    warm_time: Optional[float]
    final_state: HistoryState
    lyapunov_samples: List = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """Tabular view: t, F, S_j per class, then Lyapunov columns when recorded"""
        frame = pd.DataFrame({'t': self.times, 'F': self.F})
        for j in range(self.S.shape[1]):
            frame[f'S_{j}'] = self.S[:, j]

        if self.lyapunov_samples:
            index = {int(round(s.t / self.delta)): s for s in self.lyapunov_samples}
            steps = np.rint(self.times / self.delta).astype(int)
            columns = ['U', 'dU_analytic']
            if any(s.W is not None for s in self.lyapunov_samples):
                columns += ['W', 'dW_bound']
            for name in columns:
                values = [getattr(index[n], name) if n in index else None for n in steps]
                frame[name] = np.array([np.nan if v is None else v for v in values], dtype=float)
        return frame


def simulate(
    ic: InitialCondition,
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel,
    t_end: float,
    observers: Sequence[SimulationObserver] = (),
    corrector: bool = True
) -> TrajectoryRecord:
    """
    Iterate `step` from the initial history up to t_end

    Args:
        ic: Initial history on the kernel's slots
        grid: Susceptibility classes
        params: Demographic parameters
        kernel: Sampled infectivity kernel
        t_end: Final time (rounded to the grid)
        observers: Callbacks run on the initial state and after every step
        corrector: Whether to apply the corrector pass

    Returns:
        TrajectoryRecord with one row per grid time
    """
    if not t_end > 0:
        raise PreconditionError(f"t_end must be > 0, got {t_end}")
    if ic.S_init.shape[1] != grid.m:
        raise PreconditionError(
            f"initial history has {ic.S_init.shape[1]} classes, grid has {grid.m}"
        )

    delta = kernel.delta
    n_steps = max(int(round(t_end / delta)), 1)
    if abs(n_steps * delta - t_end) > 1e-9 * max(1.0, t_end):
        logger.warning(f"t_end={t_end} is not on the grid; running to {n_steps * delta}")

    logger.info(
        f"Simulating {n_steps} steps (delta={delta}, K={kernel.K}, classes={grid.m})"
    )

    times = delta * np.arange(n_steps + 1)
    F = np.empty(n_steps + 1)
    S = np.empty((n_steps + 1, grid.m))

    state = ic.to_state(kernel)
    F[0] = state.F_now
    S[0] = state.S_now
    warm_time = None

    for n in range(n_steps + 1):
        try:
            if n > 0:
                state = step(state, grid, params, kernel, corrector=corrector)
                F[n] = state.F_now
                S[n] = state.S_now
                if state.steps == kernel.K:
                    warm_time = state.t_now
                    logger.info(f"State warm at t={warm_time:g}")
            for observer in observers:
                observer.observe(state)
        except NumericalError as e:
            raise SimulationError(str(e), t=state.t_now) from e

    record = TrajectoryRecord(
        times=times, F=F, S=S, delta=delta, warm_time=warm_time, final_state=state
    )
    for observer in observers:
        observer.finalize(record)

    logger.info(f"Simulation finished: F(t_end)={F[-1]:.6g}")
    return record
