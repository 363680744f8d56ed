"""
Shared fixtures: the homogeneous and two-class reference models
"""

import pytest

from discretization.kernel_families import Boxcar, GridSpec, sample_kernel
from model_core.domain import ModelParams, SigmaGrid


@pytest.fixture
def homogeneous():
    """One class, λ = μ = 0.1, η = 1, boxcar ∫A = 2 on Δ = 0.5 (R0 = 2, F̄ = 0.1)"""
    grid = SigmaGrid.from_arrays([1.0], [1.0], [0.1])
    params = ModelParams(mu=0.1)
    kernel = sample_kernel(Boxcar(0.5, 4.0), GridSpec(0.5))
    return grid, params, kernel


@pytest.fixture
def two_class():
    """w = {1, 1}, λ = {0.05, 0.05}, η = {1, 2}, μ = 0.1, boxcar ∫A = 2 (R0 = 3)"""
    grid = SigmaGrid.from_arrays([1.0, 1.0], [1.0, 2.0], [0.05, 0.05])
    params = ModelParams(mu=0.1)
    kernel = sample_kernel(Boxcar(0.5, 4.0), GridSpec(0.5))
    return grid, params, kernel


@pytest.fixture
def scenario_config():
    """Raw config of the homogeneous R0 = 2 scenario"""
    return {
        'sigma': {'classes': [{'weight': 1.0, 'eta': 1.0, 'lambda': 0.1}]},
        'params': {'mu': 0.1},
        'kernel': {'type': 'boxcar', 'height': 0.5, 'width': 4.0},
        'initial': {'profile': 'constant', 'balanced': True, 'F': 0.05},
        'run': {'delta': 0.25, 't_end': 20.0},
    }
