"""
Equilibrium Solver
Infection-free and endemic equilibria, R0 and the mean susceptibilities
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from discretization.quadrature import quad_trapezoid
from model_core.domain import InfectivityKernel, ModelParams, SigmaGrid
from model_core.errors import ConsistencyError, PreconditionError, SolverError

DEFAULT_RTOL = 1e-12
DEFAULT_MAX_ITER = 200
DEFAULT_IDENTITY_TOL = 1e-9

# Absolute bisection tolerance; termination is governed by the relative one
_NEGLIGIBLE_XTOL = 1e-300


@dataclass(frozen=True, eq=False)
class EndemicEquilibrium:
    """Endemic block: F̄, S̄_j, η̄ and the incidence density v̄_j"""

    Fbar: float
    Sbar: np.ndarray
    etabar: float
    vbar: np.ndarray

    def to_dict(self) -> Dict:
        return {
            'Fbar': self.Fbar,
            'Sbar': self.Sbar.tolist(),
            'etabar': self.etabar,
            'vbar': self.vbar.tolist(),
        }


@dataclass(frozen=True, eq=False)
class EquilibriumSet:
    """Equilibria of one scenario; `endemic` is present iff R0 > 1"""

    S0: np.ndarray
    eta0: float
    R0: float
    mu: float
    endemic: Optional[EndemicEquilibrium] = None

    def to_dict(self) -> Dict:
        result = {
            'R0': self.R0,
            'S0': self.S0.tolist(),
            'eta0': self.eta0,
        }
        if self.endemic is not None:
            result['endemic'] = self.endemic.to_dict()
        return result


def relaxation_target(grid: SigmaGrid, mu: float, F: float) -> np.ndarray:
    """λ_j / (μ + η_j F): the susceptible level each class relaxes to under constant F"""
    return grid.lam / (mu + grid.eta * F)


def infection_free(grid: SigmaGrid, params: ModelParams) -> Tuple[np.ndarray, float]:
    """
    Infection-free susceptible distribution and its mean susceptibility

    Returns:
        (S⁰ per class, η⁰ = Σ_j w_j η_j S⁰_j)
    """
    S0 = relaxation_target(grid, params.mu, 0.0)
    eta0 = float(np.dot(grid.weighted_eta, S0))
    return S0, eta0


def basic_reproduction_number(eta0: float, kernel: InfectivityKernel) -> float:
    """R0 = η⁰ · ∫A"""
    return eta0 * quad_trapezoid(kernel.samples, kernel.delta)


def endemic_equation_rhs(
    F: float,
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel
) -> float:
    """
    Right-hand side of the endemic scalar equation

    [Σ_j w_j η_j λ_j / (μ + η_j F)] · ∫A, equal to R0 at F = 0 and strictly
    decreasing in F.
    """
    if F < 0:
        raise PreconditionError(f"force of infection must be >= 0, got {F}")
    S = relaxation_target(grid, params.mu, F)
    return float(np.dot(grid.weighted_eta, S)) * quad_trapezoid(kernel.samples, kernel.delta)


def solve_endemic(
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
    identity_tol: float = DEFAULT_IDENTITY_TOL
) -> Optional[EndemicEquilibrium]:
    """
    Solve for the endemic equilibrium

    Args:
        grid: Susceptibility classes
        params: Demographic parameters
        kernel: Sampled infectivity kernel
        rtol: Relative tolerance of the bisection on F̄
        max_iter: Limit on bracket doublings and on bisection iterations
        identity_tol: Allowed deviation of η̄·∫A from 1

    Returns:
        EndemicEquilibrium, or None when R0 <= 1
    """
    _, eta0 = infection_free(grid, params)
    R0 = basic_reproduction_number(eta0, kernel)
    if R0 <= 1.0:
        logger.info(f"R0 = {R0:.6g} <= 1: no endemic equilibrium")
        return None

    def residual(F: float) -> float:
        return endemic_equation_rhs(F, grid, params, kernel) - 1.0

    F_hi = 1.0
    doublings = 0
    while residual(F_hi) >= 0:
        if doublings >= max_iter:
            raise SolverError(
                f"failed to bracket the endemic equilibrium after {max_iter} doublings"
            )
        F_hi *= 2.0
        doublings += 1
    logger.debug(f"Endemic bracket [0, {F_hi:g}] after {doublings} doublings")

    try:
        Fbar, result = bisect(
            residual, 0.0, F_hi,
            xtol=_NEGLIGIBLE_XTOL, rtol=rtol, maxiter=max_iter, full_output=True
        )
    except (RuntimeError, ValueError) as e:
        raise SolverError(f"bisection failed: {e}") from e
    logger.debug(f"Bisection converged in {result.iterations} iterations: Fbar = {Fbar:.17g}")

    Sbar = relaxation_target(grid, params.mu, Fbar)
    etabar = float(np.dot(grid.weighted_eta, Sbar))
    identity = etabar * quad_trapezoid(kernel.samples, kernel.delta)
    if abs(identity - 1.0) > identity_tol:
        raise ConsistencyError(
            f"endemic identity violated: etabar * int(A) = {identity:.17g}, expected 1"
        )

    vbar = grid.eta * Fbar * Sbar
    logger.info(f"Endemic equilibrium: Fbar = {Fbar:.10g}, etabar = {etabar:.10g}")
    return EndemicEquilibrium(Fbar=float(Fbar), Sbar=Sbar, etabar=etabar, vbar=vbar)


def compute_equilibria(
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel,
    rtol: float = DEFAULT_RTOL,
    max_iter: int = DEFAULT_MAX_ITER,
    identity_tol: float = DEFAULT_IDENTITY_TOL
) -> EquilibriumSet:
    """Assemble the full equilibrium set of a scenario"""
    S0, eta0 = infection_free(grid, params)
    R0 = basic_reproduction_number(eta0, kernel)
    endemic = solve_endemic(grid, params, kernel, rtol, max_iter, identity_tol)
    return EquilibriumSet(S0=S0, eta0=eta0, R0=R0, mu=params.mu, endemic=endemic)
