"""
Quadrature
Composite trapezoid rule on uniform grids, the single quadrature used by every module
"""

import numpy as np
from scipy.integrate import trapezoid


def trapezoid_weights(K: int, delta: float) -> np.ndarray:
    """Weights c_k of the composite trapezoid rule over K+1 nodes"""
    if K < 1:
        raise ValueError(f"trapezoid rule needs at least two nodes, got K={K}")
    weights = np.full(K + 1, float(delta))
    weights[0] = weights[-1] = 0.5 * delta
    return weights


def quad_trapezoid(samples, delta: float) -> float:
    """
    Integrate uniformly spaced samples with the trapezoid rule

    Args:
        samples: Function values at 0, Δ, ..., KΔ (at least two)
        delta: Grid step Δ

    Returns:
        Trapezoid approximation of the integral; exact for linear integrands
    """
    values = np.asarray(samples, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValueError("quad_trapezoid needs at least two samples")
    return float(trapezoid(values, dx=delta))
