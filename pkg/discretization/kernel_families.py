"""
Kernel families
Analytic infection-age profiles and their sampling onto the shared τ/t grid
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Tuple, Type

import numpy as np
from loguru import logger
from scipy.stats import gamma as gamma_dist

from model_core.domain import InfectivityKernel
from model_core.errors import KernelError


def _require_non_negative(name: str, value: float) -> None:
    if not np.isfinite(value) or value < 0:
        raise KernelError(f"must be a finite value >= 0, got {value}", f"kernel.{name}")


def _require_positive(name: str, value: float) -> None:
    if not np.isfinite(value) or value <= 0:
        raise KernelError(f"must be a finite value > 0, got {value}", f"kernel.{name}")


class KernelFamily(ABC):
    """Base class for analytic kernel families"""

    type_name: str = ''

    @abstractmethod
    def support_end(self) -> float:
        """Right end of the support, before grid alignment"""
        pass

    @abstractmethod
    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        """Evaluate A(τ); zero beyond the cutoff"""
        pass

    @abstractmethod
    def to_config(self) -> Dict:
        """Serialize to the `kernel` config section"""
        pass

    @classmethod
    @abstractmethod
    def from_config(cls, config: Dict) -> 'KernelFamily':
        """Build from a validated `kernel` config section"""
        pass


@dataclass(frozen=True)
class Boxcar(KernelFamily):
    """Constant infectivity `height` on [0, width]"""

    height: float
    width: float
    type_name = 'boxcar'

    def __post_init__(self):
        _require_non_negative('height', self.height)
        _require_positive('width', self.width)

    def support_end(self) -> float:
        return self.width

    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        inside = (tau >= 0) & (tau <= self.width * (1 + 1e-12))
        return np.where(inside, self.height, 0.0)

    def to_config(self) -> Dict:
        return {'type': self.type_name, 'height': self.height, 'width': self.width}

    @classmethod
    def from_config(cls, config: Dict) -> 'Boxcar':
        return cls(height=float(config['height']), width=float(config['width']))


@dataclass(frozen=True)
class TruncatedExponential(KernelFamily):
    """A(τ) = β·exp(-γτ) on [0, cutoff]"""

    beta: float
    gamma: float
    cutoff: float
    type_name = 'truncated_exponential'

    def __post_init__(self):
        _require_non_negative('beta', self.beta)
        _require_non_negative('gamma', self.gamma)
        _require_positive('cutoff', self.cutoff)

    def support_end(self) -> float:
        return self.cutoff

    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        inside = (tau >= 0) & (tau <= self.cutoff * (1 + 1e-12))
        return np.where(inside, self.beta * np.exp(-self.gamma * np.clip(tau, 0, None)), 0.0)

    def to_config(self) -> Dict:
        return {
            'type': self.type_name,
            'beta': self.beta,
            'gamma': self.gamma,
            'cutoff': self.cutoff,
        }

    @classmethod
    def from_config(cls, config: Dict) -> 'TruncatedExponential':
        return cls(
            beta=float(config['beta']),
            gamma=float(config['gamma']),
            cutoff=float(config['cutoff']),
        )


@dataclass(frozen=True)
class TruncatedGamma(KernelFamily):
    """A(τ) = scale · Gamma(shape, rate) density on [0, cutoff]"""

    scale: float
    shape: float
    cutoff: float
    rate: float = 1.0
    type_name = 'truncated_gamma'

    def __post_init__(self):
        _require_non_negative('scale', self.scale)
        _require_positive('shape', self.shape)
        _require_positive('rate', self.rate)
        _require_positive('cutoff', self.cutoff)

    def support_end(self) -> float:
        return self.cutoff

    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        density = gamma_dist.pdf(tau, a=self.shape, scale=1.0 / self.rate)
        inside = (tau >= 0) & (tau <= self.cutoff * (1 + 1e-12))
        # shape < 1 has an integrable singularity at 0 that a grid sample cannot hold
        density = np.where(np.isfinite(density), density, 0.0)
        return np.where(inside, self.scale * density, 0.0)

    def to_config(self) -> Dict:
        return {
            'type': self.type_name,
            'scale': self.scale,
            'shape': self.shape,
            'rate': self.rate,
            'cutoff': self.cutoff,
        }

    @classmethod
    def from_config(cls, config: Dict) -> 'TruncatedGamma':
        return cls(
            scale=float(config['scale']),
            shape=float(config['shape']),
            cutoff=float(config['cutoff']),
            rate=float(config.get('rate', 1.0)),
        )


@dataclass(frozen=True)
class Table(KernelFamily):
    """Piecewise-linear kernel through (τ, A) points, zero past the last τ"""

    points: Tuple[Tuple[float, float], ...]
    type_name = 'table'

    def __post_init__(self):
        points = tuple((float(t), float(a)) for t, a in self.points)
        object.__setattr__(self, 'points', points)

        if len(points) < 2:
            raise KernelError("table needs at least two points", "kernel.points")
        taus = np.array([p[0] for p in points])
        values = np.array([p[1] for p in points])
        if taus[0] != 0.0:
            raise KernelError(f"table must start at tau = 0, got {taus[0]}", "kernel.points.0.0")
        if np.any(np.diff(taus) <= 0):
            bad = int(np.argmax(np.diff(taus) <= 0)) + 1
            raise KernelError("tau values must be strictly increasing", f"kernel.points.{bad}.0")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            bad = int(np.argmax(~np.isfinite(values) | (values < 0)))
            raise KernelError(
                f"kernel value must be a finite value >= 0, got {values[bad]}",
                f"kernel.points.{bad}.1"
            )

    def support_end(self) -> float:
        return self.points[-1][0]

    def evaluate(self, tau: np.ndarray) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        taus = [p[0] for p in self.points]
        values = [p[1] for p in self.points]
        return np.interp(tau, taus, values, left=0.0, right=0.0)

    def to_config(self) -> Dict:
        return {'type': self.type_name, 'points': [list(p) for p in self.points]}

    @classmethod
    def from_config(cls, config: Dict) -> 'Table':
        return cls(points=tuple(tuple(p) for p in config['points']))


KERNEL_FAMILIES: Dict[str, Type[KernelFamily]] = {
    Boxcar.type_name: Boxcar,
    TruncatedExponential.type_name: TruncatedExponential,
    TruncatedGamma.type_name: TruncatedGamma,
    Table.type_name: Table,
}


def kernel_from_config(config: Dict) -> KernelFamily:
    """Build a kernel family from a validated `kernel` config section"""
    kind = config.get('type')
    if kind not in KERNEL_FAMILIES:
        raise KernelError(f"unknown kernel type {kind!r}", "kernel.type")

    return KERNEL_FAMILIES[kind].from_config(config)


@dataclass(frozen=True)
class GridSpec:
    """Uniform step Δ shared by the infection-age axis and time stepping"""

    delta: float

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta <= 0:
            raise KernelError(f"grid step must be > 0, got {self.delta}", "run.delta")

    def slots_for(self, cutoff: float) -> int:
        """Number of panels K covering [0, cutoff], rounding up to the grid"""
        ratio = cutoff / self.delta
        K = math.ceil(ratio - 1e-9 * max(1.0, ratio))
        return max(int(K), 1)


def sample_kernel(family: KernelFamily, grid: GridSpec) -> InfectivityKernel:
    """
    Sample a kernel family at kΔ, padding τ̄ up to a multiple of Δ

    Args:
        family: Analytic kernel family
        grid: Grid specification

    Returns:
        InfectivityKernel with K+1 samples and τ̄ = KΔ
    """
    K = grid.slots_for(family.support_end())
    tau = grid.delta * np.arange(K + 1)
    samples = np.asarray(family.evaluate(tau), dtype=float)

    if np.any(samples < 0) or not np.all(np.isfinite(samples)):
        raise KernelError(f"{family.type_name} kernel produced negative or non-finite samples")

    logger.debug(f"Sampled {family.type_name} kernel: K={K}, tau_bar={K * grid.delta}")
    return InfectivityKernel(samples=samples, delta=grid.delta, tau_bar=K * grid.delta)


def kernel_support(kernel: InfectivityKernel) -> float:
    """
    Discrete support length: (1 + last k with A_k > 0)·Δ, capped at τ̄

    Returns 0 for a kernel without positive samples.
    """
    positive = np.nonzero(kernel.samples > 0)[0]
    if positive.size == 0:
        return 0.0
    return min((int(positive[-1]) + 1) * kernel.delta, kernel.tau_bar)

