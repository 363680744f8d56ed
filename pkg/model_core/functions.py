"""
Pointwise model functions
The convexity gauge g and the tail-integral kernels of the Lyapunov functionals
"""

from typing import Optional, Union

import numpy as np

from .domain import InfectivityKernel, LyapunovKernels
from .errors import DomainError, PreconditionError

# Arguments at or below this scale are treated as having left the admissible region
G_DOMAIN_FLOOR = 1e-300

ArrayLike = Union[float, np.ndarray]


def g(x: ArrayLike) -> ArrayLike:
    """
    Volterra gauge g(x) = x - 1 - log x

    Computed as d - log1p(d) with d = x - 1, which keeps the result
    non-negative in floating point near x = 1.

    Args:
        x: Positive scalar or array

    Returns:
        g(x), same shape as the input

    Examples:
        >>> g(1.0)
        0.0
        >>> round(g(0.5), 7)
        0.1931472
    """
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= G_DOMAIN_FLOOR):
        bad = values[~np.isfinite(values) | (values <= G_DOMAIN_FLOOR)]
        raise DomainError(f"g is undefined at {bad.ravel()[0]!r}")

    d = values - 1.0
    result = d - np.log1p(d)
    if result.ndim == 0:
        return float(result)
    return result


def tail_integrals(kernel: InfectivityKernel) -> np.ndarray:
    """
    Trapezoid tail sums T_k = ∫_{kΔ}^{τ̄} A(τ) dτ

    Built by backward accumulation of panels so that T_K = 0 exactly and
    T_k - T_{k+1} is exactly one panel.
    """
    A = kernel.samples
    panels = 0.5 * kernel.delta * (A[:-1] + A[1:])
    tails = np.zeros(A.size)
    tails[:-1] = np.cumsum(panels[::-1])[::-1]
    return tails


def build_lyapunov_kernels(
    kernel: InfectivityKernel,
    eta0: float,
    etabar: Optional[float] = None
) -> LyapunovKernels:
    """
    Tail kernels ξ = η⁰·T and κ = η̄·T of the Lyapunov functionals

    Args:
        kernel: Sampled infectivity kernel
        eta0: Mean susceptibility at the infection-free equilibrium
        etabar: Mean susceptibility at the endemic equilibrium, if one exists

    Returns:
        LyapunovKernels on the kernel's τ-grid; kappa is None without etabar
    """
    if not eta0 > 0:
        raise PreconditionError(f"eta0 must be > 0, got {eta0}")
    if etabar is not None and not etabar > 0:
        raise PreconditionError(f"etabar must be > 0, got {etabar}")

    tails = tail_integrals(kernel)
    kappa = etabar * tails if etabar is not None else None
    return LyapunovKernels(xi=eta0 * tails, kappa=kappa, delta=kernel.delta)
