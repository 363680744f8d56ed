"""Discretization package initialization"""

from .kernel_families import (
    Boxcar,
    GridSpec,
    KernelFamily,
    Table,
    TruncatedExponential,
    TruncatedGamma,
    kernel_from_config,
    kernel_support,
    sample_kernel,
)
from .quadrature import quad_trapezoid, trapezoid_weights

__all__ = [
    'KernelFamily', 'Boxcar', 'TruncatedExponential', 'TruncatedGamma', 'Table',
    'GridSpec', 'sample_kernel', 'kernel_support', 'kernel_from_config',
    'quad_trapezoid', 'trapezoid_weights',
]
