"""
Integration tests for discretization accuracy: the U identity under grid
refinement, the stepper's observed order and the homogeneous reduction
"""

import math

import numpy as np
import pytest

from discretization.kernel_families import GridSpec, TruncatedGamma, sample_kernel
from equilibria.equilibrium_solver import compute_equilibria
from lyapunov.monitor import LyapunovObserver, monotonicity_monitor
from model_core.domain import ModelParams, SigmaGrid
from scenarios.scenario_parser import ScenarioParser
from simulator.history import InitialProfile, build_initial_condition
from simulator.renewal_stepper import simulate
from verification.oracles import MIN_ORDER, homogeneous_reduction_check, refinement_study

pytestmark = pytest.mark.slow

# Gamma(2, 1) density is tiny at τ = 8, so the truncation jump is negligible
SHAPE = 2.0
CUTOFF = 8.0
_GAMMA_MASS = 1.0 - (1.0 + CUTOFF) * math.exp(-CUTOFF)


def _smooth_config(R0, delta, t_end, classes=None):
    return {
        'sigma': {'classes': classes or [{'weight': 1.0, 'eta': 1.0, 'lambda': 0.1}]},
        'params': {'mu': 0.1},
        'kernel': {
            'type': 'truncated_gamma',
            'scale': R0 / _GAMMA_MASS,
            'shape': SHAPE,
            'cutoff': CUTOFF,
        },
        'initial': {'profile': 'constant', 'balanced': True, 'F': 0.01},
        'run': {'delta': delta, 't_end': t_end},
    }


def _max_U_residual(delta):
    grid = SigmaGrid.from_arrays([1.0], [1.0], [0.1])
    params = ModelParams(mu=0.1)
    kernel = sample_kernel(
        TruncatedGamma(scale=0.8 / _GAMMA_MASS, shape=SHAPE, cutoff=CUTOFF), GridSpec(delta)
    )
    eq = compute_equilibria(grid, params, kernel)
    ic = build_initial_condition(InitialProfile(balanced=True, F=0.01), grid, params, kernel)
    observer = LyapunovObserver(eq, grid, kernel, record_W=False)
    record = simulate(ic, grid, params, kernel, 2 * CUTOFF, observers=[observer])

    report = monotonicity_monitor(record.lyapunov_samples, delta, 1.0, check_U=True)
    assert report.u_violations == 0
    return report.max_U_residual


def test_U_identity_converges_at_second_order():
    """Test |FD(U) - dU/dt| shrinks by at least 3.5 per halving of Δ"""
    residuals = [_max_U_residual(delta) for delta in (0.1, 0.05, 0.025)]

    assert residuals[0] / residuals[1] >= 3.5
    assert residuals[1] / residuals[2] >= 3.5


def test_refinement_order_smooth_kernel():
    """Test the stepper's observed order on a smooth kernel"""
    scenario = ScenarioParser().parse_dict(_smooth_config(2.0, 0.1, 20.0))

    report = refinement_study(scenario, levels=4)

    assert report.observed_order >= MIN_ORDER
    assert report.passed
    assert len(report.details['log2_ratios']) == 2


def test_refinement_exact_without_transmission():
    """Test A ≡ 0 leaves only demography, which every grid resolves exactly"""
    config = _smooth_config(0.0, 0.1, 20.0)
    config['initial'] = {'profile': 'ramp', 'S_scale': 0.5, 'F': 0.0}
    scenario = ScenarioParser().parse_dict(config)

    report = refinement_study(scenario, levels=4)

    assert report.passed
    assert report.max_abs_err <= 1e-10


def test_homogeneous_reduction_multiclass():
    """Test four η = 1 classes reproduce the aggregated single-class run"""
    classes = [
        {'weight': w, 'eta': 1.0, 'lambda': lam}
        for w, lam in [(0.4, 0.05), (0.3, 0.1), (0.2, 0.15), (0.1, 0.3)]
    ]
    config = _smooth_config(3.0, 0.05, 60.0, classes)
    config['initial'] = {'profile': 'ramp', 'S_scale': 0.8, 'F': 0.02, 'F_start': 0.005}
    scenario = ScenarioParser().parse_dict(config)

    report = homogeneous_reduction_check(scenario)

    assert report.passed
    assert report.max_abs_err <= 1e-10
    assert np.isfinite(report.details['max_err_S'])
