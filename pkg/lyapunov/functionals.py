"""
Lyapunov functionals
U certifies the infection-free equilibrium, W the endemic one; both are
evaluated on the sliding history window with the shared trapezoid rule
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from discretization.quadrature import trapezoid_weights
from equilibria.equilibrium_solver import EndemicEquilibrium, EquilibriumSet
from model_core.domain import InfectivityKernel, LyapunovKernels, SigmaGrid
from model_core.errors import DomainError, PreconditionError
from model_core.functions import g
from simulator.history import HistoryState


@dataclass(frozen=True, eq=False)
class LyapunovSample:
    """Lyapunov diagnostics of one warm state"""

    t: float
    U: float
    dU_analytic: float
    G: np.ndarray
    W: Optional[float] = None
    dW_bound: Optional[float] = None
    jensen_excess: Optional[float] = None
    incidence_balance: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            't': self.t,
            'U': self.U,
            'dU_analytic': self.dU_analytic,
            'G': self.G.tolist(),
            'W': self.W,
            'dW_bound': self.dW_bound,
            'jensen_excess': self.jensen_excess,
            'incidence_balance': self.incidence_balance,
        }


def _require_warm(history: HistoryState, what: str) -> None:
    if not history.warm:
        raise PreconditionError(f"{what} needs a warm state (t >= tau_bar), got t={history.t_now}")


def _require_endemic(eq: EquilibriumSet) -> EndemicEquilibrium:
    if eq.endemic is None:
        raise PreconditionError("no endemic equilibrium (R0 <= 1)")
    return eq.endemic


def _require_interior(history: HistoryState) -> None:
    if np.any(history.F_hist <= 0):
        raise DomainError("state lies on the boundary: some force-of-infection slot is 0")


def _weighted_incidence(history: HistoryState, grid: SigmaGrid) -> np.ndarray:
    """F(t - kΔ)·Σ_j w_j η_j S(t - kΔ, j) per slot"""
    return history.F_hist * (history.S_hist @ grid.weighted_eta)


def eval_U(
    history: HistoryState,
    eq: EquilibriumSet,
    kernels: LyapunovKernels,
    grid: SigmaGrid
) -> float:
    """
    U = Σ_j w_j S⁰_j g(S_j/S⁰_j) + Σ_j w_j ∫ ξ(τ) η_j F(t-τ) S(t-τ, j) dτ
    """
    _require_warm(history, "U")
    if history.K != kernels.K:
        raise PreconditionError(f"history has K={history.K}, kernels have K={kernels.K}")

    S0 = eq.S0
    first = float(np.sum(grid.weights * S0 * g(history.S_now / S0)))
    quad = trapezoid_weights(kernels.K, kernels.delta) * kernels.xi
    second = float(np.dot(quad, _weighted_incidence(history, grid)))
    return first + second


def eval_dU_analytic(history: HistoryState, eq: EquilibriumSet, grid: SigmaGrid) -> float:
    """
    Closed-form time derivative of U

    -μ Σ_j w_j S_j (1 - S⁰_j/S_j)² - (1 - R0)·F·Σ_j w_j η_j S_j. Pointwise in
    the current slot, so it is also usable before the state is warm.
    """
    S = history.S_now
    F = history.F_now
    demographic = -eq.mu * float(np.sum(grid.weights * S * (1.0 - eq.S0 / S) ** 2))
    transmission = -(1.0 - eq.R0) * F * float(np.dot(grid.weighted_eta, S))
    return demographic + transmission


def eval_G(history: HistoryState, kernel: InfectivityKernel, grid: SigmaGrid) -> np.ndarray:
    """G_j = ∫ A(τ) F(t-τ) S(t-τ, j) dτ per class"""
    _require_warm(history, "G")
    if history.K != kernel.K:
        raise PreconditionError(f"history has K={history.K}, kernel has K={kernel.K}")
    return kernel.weighted_samples @ (history.F_hist[:, np.newaxis] * history.S_hist)


def eval_W(
    history: HistoryState,
    eq: EquilibriumSet,
    kernels: LyapunovKernels,
    grid: SigmaGrid
) -> float:
    """
    W = Σ_j w_j S̄_j g(S_j/S̄_j) + Σ_j w_j ∫ κ(τ) v̄_j g(F(t-τ)S(t-τ,j)/(F̄ S̄_j)) dτ
    """
    _require_warm(history, "W")
    endemic = _require_endemic(eq)
    if kernels.kappa is None:
        raise PreconditionError("Lyapunov kernels were built without etabar")
    _require_interior(history)

    Sbar = endemic.Sbar
    first = float(np.sum(grid.weights * Sbar * g(history.S_now / Sbar)))

    ratio = history.F_hist[:, np.newaxis] * history.S_hist / (endemic.Fbar * Sbar[np.newaxis, :])
    quad = trapezoid_weights(kernels.K, kernels.delta) * kernels.kappa
    second = float(np.dot(grid.weights * endemic.vbar, quad @ g(ratio)))
    return first + second


def eval_dW_bound(
    history: HistoryState,
    eq: EquilibriumSet,
    grid: SigmaGrid,
    kernel: InfectivityKernel
) -> float:
    """
    Upper bound on dW/dt

    -μ Σ_j w_j S_j (1 - S̄_j/S_j)² - Σ_j w_j v̄_j [g(S̄_j/S_j) + g(η̄ G_j/(F S̄_j))],
    a sum of non-positive terms.
    """
    _require_warm(history, "dW bound")
    endemic = _require_endemic(eq)
    F = history.F_now
    if F <= 0:
        raise DomainError("dW bound is undefined when F(t) = 0")

    S = history.S_now
    Sbar = endemic.Sbar
    G = eval_G(history, kernel, grid)

    demographic = -eq.mu * float(np.sum(grid.weights * S * (1.0 - Sbar / S) ** 2))
    gaps = g(Sbar / S) + g(endemic.etabar * G / (F * Sbar))
    return demographic - float(np.dot(grid.weights * endemic.vbar, gaps))


def jensen_excess(
    history: HistoryState,
    eq: EquilibriumSet,
    kernel: InfectivityKernel,
    grid: SigmaGrid
) -> float:
    """
    Largest per-class excess of η̄ ∫ A log(FS/(F̄S̄)) over log(η̄ G/(F̄ S̄))

    Non-positive up to quadrature error, since η̄·c_k·A_k are probability weights.
    """
    endemic = _require_endemic(eq)
    _require_interior(history)
    Sbar = endemic.Sbar

    log_ratio = np.log(
        history.F_hist[:, np.newaxis] * history.S_hist / (endemic.Fbar * Sbar[np.newaxis, :])
    )
    lhs = endemic.etabar * (kernel.weighted_samples @ log_ratio)
    rhs = np.log(endemic.etabar * eval_G(history, kernel, grid) / (endemic.Fbar * Sbar))
    return float(np.max(lhs - rhs))


def incidence_balance(
    history: HistoryState,
    eq: EquilibriumSet,
    kernel: InfectivityKernel,
    grid: SigmaGrid
) -> float:
    """
    Σ_j w_j v̄_j (1 - η̄ G_j/(F S̄_j))

    Vanishes on any state produced by the stepper, because Σ_j w_j η_j G_j
    reproduces F(t) with the same quadrature.
    """
    endemic = _require_endemic(eq)
    F = history.F_now
    if F <= 0:
        raise DomainError("incidence balance is undefined when F(t) = 0")
    G = eval_G(history, kernel, grid)
    return float(np.dot(
        grid.weights * endemic.vbar, 1.0 - endemic.etabar * G / (F * endemic.Sbar)
    ))
