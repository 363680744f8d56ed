"""
History window
Sliding (S, F) history over [t - τ̄, t] and the initial data that seeds it
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from equilibria.equilibrium_solver import basic_reproduction_number, infection_free
from model_core.domain import InfectivityKernel, ModelParams, SigmaGrid
from model_core.errors import PreconditionError, ScenarioError

PROFILES = ('constant', 'ramp', 'pulse')


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.flags.writeable = False
    return array


def _check_slots(S_hist: np.ndarray, F_hist: np.ndarray) -> None:
    if S_hist.ndim != 2 or F_hist.ndim != 1 or S_hist.shape[0] != F_hist.shape[0]:
        raise PreconditionError(
            f"history shapes disagree: S {S_hist.shape}, F {F_hist.shape}"
        )
    if not np.all(S_hist > 0):
        raise PreconditionError("susceptible history must be strictly positive")
    if not np.all(F_hist >= 0) or not np.all(np.isfinite(F_hist)):
        raise PreconditionError("force-of-infection history must be finite and >= 0")


@dataclass(frozen=True, eq=False)
class HistoryState:
    """
    State of the system on the window [t - τ̄, t]

    Slot k holds S(t - kΔ, ·) and F(t - kΔ); slot 0 is the present.
    """

    t_now: float
    S_hist: np.ndarray
    F_hist: np.ndarray
    warm: bool
    steps: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'S_hist', _read_only(self.S_hist))
        object.__setattr__(self, 'F_hist', _read_only(self.F_hist))

    @property
    def K(self) -> int:
        return self.F_hist.size - 1

    @property
    def S_now(self) -> np.ndarray:
        return self.S_hist[0]

    @property
    def F_now(self) -> float:
        return float(self.F_hist[0])


@dataclass(frozen=True, eq=False)
class InitialCondition:
    """Initial history sampled on the slots s = -kΔ, k = 0..K"""

    S_init: np.ndarray
    F_init: np.ndarray

    def __post_init__(self):
        S_init = _read_only(self.S_init)
        F_init = _read_only(self.F_init)
        _check_slots(S_init, F_init)
        object.__setattr__(self, 'S_init', S_init)
        object.__setattr__(self, 'F_init', F_init)

    def to_state(self, kernel: InfectivityKernel) -> HistoryState:
        """History at t = 0"""
        if self.F_init.size != kernel.K + 1:
            raise PreconditionError(
                f"initial history has {self.F_init.size} slots, kernel needs {kernel.K + 1}"
            )
        return HistoryState(t_now=0.0, S_hist=self.S_init, F_hist=self.F_init, warm=False)


@dataclass(frozen=True)
class InitialProfile:
    """
    Named initial-history profile as written in the `initial` config section

    S is taken per class from `S`, or as S_scale·S⁰ when `S` is omitted;
    `balanced` uses S⁰/R0 instead, which makes a constant F profile satisfy
    the renewal relation at s = 0.
    """

    profile: str = 'constant'
    S: Optional[Tuple[float, ...]] = None
    S_scale: float = 1.0
    balanced: bool = False
    F: float = 0.0
    F_start: float = 0.0

    def __post_init__(self):
        if self.S is not None:
            object.__setattr__(self, 'S', tuple(float(s) for s in self.S))
        if self.profile not in PROFILES:
            raise ScenarioError(f"unknown profile {self.profile!r}", "initial.profile")

    def to_config(self) -> Dict:
        config = {
            'profile': self.profile,
            'S_scale': self.S_scale,
            'balanced': self.balanced,
            'F': self.F,
            'F_start': self.F_start,
        }
        if self.S is not None:
            config['S'] = list(self.S)
        return config


def build_initial_condition(
    profile: InitialProfile,
    grid: SigmaGrid,
    params: ModelParams,
    kernel: InfectivityKernel
) -> InitialCondition:
    """Sample an initial profile onto the kernel's slots"""
    K = kernel.K
    S0, eta0 = infection_free(grid, params)

    if profile.S is not None:
        if len(profile.S) != grid.m:
            raise ScenarioError(
                f"expected {grid.m} per-class values, got {len(profile.S)}", "initial.S"
            )
        S_level = np.array(profile.S, dtype=float)
    elif profile.balanced:
        R0 = basic_reproduction_number(eta0, kernel)
        if R0 <= 0:
            raise ScenarioError("balanced history needs R0 > 0", "initial.balanced")
        S_level = S0 / R0
    else:
        S_level = profile.S_scale * S0

    if not np.all(S_level > 0):
        raise ScenarioError("initial susceptibles must be > 0", "initial.S")
    if profile.F < 0 or profile.F_start < 0:
        raise ScenarioError("initial force of infection must be >= 0", "initial.F")

    if profile.profile == 'constant':
        F_init = np.full(K + 1, profile.F)
    elif profile.profile == 'ramp':
        # slot 0 is s = 0, slot K is s = -τ̄
        F_init = np.linspace(profile.F, profile.F_start, K + 1)
    else:
        F_init = np.zeros(K + 1)
        F_init[K] = profile.F

    S_init = np.tile(S_level, (K + 1, 1))
    return InitialCondition(S_init=S_init, F_init=F_init)
