"""
Domain types
Susceptibility classes, demographic parameters and sampled infection-age kernels
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .errors import KernelError, ScenarioError


def _frozen_array(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class SigmaClass:
    """One susceptibility class: measure weight, relative susceptibility, recruitment"""

    weight: float
    eta: float
    lam: float


@dataclass(frozen=True)
class SigmaGrid:
    """Finite weighted set of susceptibility classes; σ-integrals are weighted sums"""

    classes: Tuple[SigmaClass, ...]

    def __post_init__(self):
        object.__setattr__(self, 'classes', tuple(self.classes))
        if not self.classes:
            raise ScenarioError("at least one susceptibility class is required", "sigma.classes")

        for j, cls in enumerate(self.classes):
            path = f"sigma.classes.{j}"
            if not np.isfinite(cls.weight) or cls.weight <= 0:
                raise ScenarioError(f"weight must be > 0, got {cls.weight}", f"{path}.weight")
            if not np.isfinite(cls.lam) or cls.lam <= 0:
                raise ScenarioError(f"lambda must be > 0, got {cls.lam}", f"{path}.lambda")
            if not np.isfinite(cls.eta) or cls.eta < 0:
                raise ScenarioError(f"eta must be >= 0, got {cls.eta}", f"{path}.eta")

        if not any(cls.eta > 0 for cls in self.classes):
            raise ScenarioError("at least one class needs eta > 0", "sigma.classes")

    @classmethod
    def from_arrays(
        cls,
        weights: Sequence[float],
        eta: Sequence[float],
        lam: Sequence[float]
    ) -> 'SigmaGrid':
        """Build a grid from parallel per-class sequences"""
        if not (len(weights) == len(eta) == len(lam)):
            raise ScenarioError("weights, eta and lambda must have equal length", "sigma.classes")
        return cls(tuple(
            SigmaClass(float(w), float(e), float(l)) for w, e, l in zip(weights, eta, lam)
        ))

    @property
    def m(self) -> int:
        return len(self.classes)

    @cached_property
    def weights(self) -> np.ndarray:
        return _frozen_array([c.weight for c in self.classes])

    @cached_property
    def eta(self) -> np.ndarray:
        return _frozen_array([c.eta for c in self.classes])

    @cached_property
    def lam(self) -> np.ndarray:
        return _frozen_array([c.lam for c in self.classes])

    @cached_property
    def weighted_eta(self) -> np.ndarray:
        """w_j·η_j, the class weights of every susceptibility-weighted sum"""
        return _frozen_array(self.weights * self.eta)

    @property
    def total_inflow(self) -> float:
        return float(np.sum(self.weights * self.lam))


@dataclass(frozen=True)
class ModelParams:
    """Demographic parameters"""

    mu: float

    def __post_init__(self):
        if not np.isfinite(self.mu) or self.mu <= 0:
            raise ScenarioError(f"mu must be > 0, got {self.mu}", "params.mu")


@dataclass(frozen=True, eq=False)
class InfectivityKernel:
    """Infection-age profile A sampled at kΔ, k = 0..K, with τ̄ = KΔ"""

    samples: np.ndarray
    delta: float
    tau_bar: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise KernelError("kernel needs at least two samples on a 1-D grid", "kernel")
        if not np.all(np.isfinite(samples)):
            raise KernelError("kernel samples must be finite", "kernel")
        if np.any(samples < 0):
            bad = int(np.argmin(samples))
            raise KernelError(f"negative kernel sample A[{bad}] = {samples[bad]}", "kernel")
        if not self.delta > 0:
            raise KernelError(f"grid step must be > 0, got {self.delta}", "run.delta")

        K = samples.size - 1
        if abs(self.tau_bar - K * self.delta) > 1e-9 * max(1.0, self.tau_bar):
            raise KernelError(
                f"tau_bar {self.tau_bar} is not K*delta = {K * self.delta}", "kernel"
            )

        object.__setattr__(self, 'samples', _frozen_array(samples))
        object.__setattr__(self, 'tau_bar', K * self.delta)

        if not np.any(samples > 0):
            logger.warning("Kernel has no positive mass; dynamics are infection-free")

    @property
    def K(self) -> int:
        return self.samples.size - 1

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoid weights over the K+1 slots"""
        from discretization.quadrature import trapezoid_weights

        return _frozen_array(trapezoid_weights(self.K, self.delta))

    @cached_property
    def weighted_samples(self) -> np.ndarray:
        """c_k·A_k, the renewal convolution coefficients"""
        return _frozen_array(self.weights * self.samples)


@dataclass(frozen=True, eq=False)
class LyapunovKernels:
    """Tail integrals ξ and κ on the kernel's τ-grid"""

    xi: np.ndarray
    kappa: Optional[np.ndarray]
    delta: float

    def __post_init__(self):
        object.__setattr__(self, 'xi', _frozen_array(self.xi))
        if self.kappa is not None:
            object.__setattr__(self, 'kappa', _frozen_array(self.kappa))

    @property
    def K(self) -> int:
        return self.xi.size - 1
