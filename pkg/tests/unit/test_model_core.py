"""
Unit tests for model core types and functions
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from model_core.domain import InfectivityKernel, ModelParams, SigmaClass, SigmaGrid
from model_core.errors import (
    DomainError,
    KernelError,
    NumericalError,
    PreconditionError,
    ScenarioError,
    SimulationError,
)
from model_core.functions import build_lyapunov_kernels, g, tail_integrals


def boxcar_kernel(height=0.5, width=4.0, delta=0.5):
    K = int(round(width / delta))
    return InfectivityKernel(samples=np.full(K + 1, height), delta=delta, tau_bar=K * delta)


def test_g_examples():
    """Test g at its minimum and two reference points"""
    assert g(1.0) == 0.0
    assert g(math.e) == pytest.approx(math.e - 2, abs=1e-12)
    assert g(0.5) == pytest.approx(0.5 - 1 + math.log(2), abs=1e-12)
    assert round(g(0.5), 7) == 0.1931472


def test_g_array_input():
    """Test g keeps the input shape"""
    values = g(np.array([0.5, 1.0, 2.0]))

    assert values.shape == (3,)
    assert values[1] == 0.0
    assert np.all(values >= 0)


@given(st.floats(min_value=1e-12, max_value=1e12))
def test_g_non_negative(x):
    """Test g >= 0 everywhere on its domain"""
    assert g(x) >= 0.0


def test_g_zero_only_at_one():
    """Test g vanishes only at x = 1 on a log-spaced sample"""
    x = np.logspace(-8, 8, 401)
    values = g(x)
    assert np.all(values[x != 1.0] > 0)


@pytest.mark.parametrize("x", [0.0, -1.0, 1e-301, float('nan'), float('inf')])
def test_g_domain_error(x):
    """Test arguments outside the domain raise"""
    with pytest.raises(DomainError):
        g(x)


def test_sigma_grid_validation():
    """Test class validation reports the field path"""
    with pytest.raises(ScenarioError, match=r"sigma.classes.1.lambda"):
        SigmaGrid((SigmaClass(1.0, 1.0, 0.1), SigmaClass(1.0, 1.0, 0.0)))
    with pytest.raises(ScenarioError, match=r"sigma.classes.0.weight"):
        SigmaGrid((SigmaClass(0.0, 1.0, 0.1),))
    with pytest.raises(ScenarioError, match=r"sigma.classes.0.eta"):
        SigmaGrid((SigmaClass(1.0, -1.0, 0.1),))
    with pytest.raises(ScenarioError, match="eta > 0"):
        SigmaGrid((SigmaClass(1.0, 0.0, 0.1),))
    with pytest.raises(ScenarioError):
        SigmaGrid(())


def test_sigma_grid_arrays():
    """Test per-class arrays and weighted sums"""
    grid = SigmaGrid.from_arrays([1.0, 2.0], [1.0, 0.5], [0.05, 0.1])

    assert grid.m == 2
    np.testing.assert_array_equal(grid.weighted_eta, [1.0, 1.0])
    assert grid.total_inflow == pytest.approx(0.25)
    with pytest.raises(ValueError):
        grid.eta[0] = 3.0


def test_model_params_validation():
    """Test mu must be positive"""
    with pytest.raises(ScenarioError, match="params.mu"):
        ModelParams(mu=0.0)


def test_kernel_validation():
    """Test sampled kernel invariants"""
    with pytest.raises(KernelError, match="negative"):
        InfectivityKernel(samples=np.array([0.5, -0.1, 0.5]), delta=0.5, tau_bar=1.0)
    with pytest.raises(KernelError):
        InfectivityKernel(samples=np.array([0.5]), delta=0.5, tau_bar=0.0)
    with pytest.raises(KernelError, match="tau_bar"):
        InfectivityKernel(samples=np.array([0.5, 0.5, 0.5]), delta=0.5, tau_bar=2.0)
    with pytest.raises(KernelError):
        InfectivityKernel(samples=np.array([0.5, np.inf]), delta=0.5, tau_bar=0.5)


def test_kernel_weights():
    """Test trapezoid weights and convolution coefficients"""
    kernel = boxcar_kernel()

    assert kernel.K == 8
    assert kernel.tau_bar == 4.0
    assert kernel.weights[0] == 0.25
    assert kernel.weights[4] == 0.5
    assert kernel.weighted_samples.sum() == pytest.approx(2.0)


def test_zero_kernel_is_allowed():
    """Test an all-zero kernel constructs (infection-free dynamics)"""
    kernel = InfectivityKernel(samples=np.zeros(5), delta=0.5, tau_bar=2.0)
    assert kernel.K == 4


def test_lyapunov_kernels_boxcar():
    """Test xi on the boxcar example"""
    kernels = build_lyapunov_kernels(boxcar_kernel(), eta0=1.0)

    assert kernels.xi[0] == pytest.approx(2.0, abs=1e-14)
    assert kernels.xi[4] == pytest.approx(1.0, abs=1e-14)
    assert kernels.xi[8] == 0.0
    assert kernels.kappa is None


def test_lyapunov_kernels_properties():
    """Test telescoping, monotonicity and proportionality of the tails"""
    tau = 0.1 * np.arange(31)
    kernel = InfectivityKernel(samples=np.exp(-tau) * tau, delta=0.1, tau_bar=3.0)
    Q = float(np.sum(kernel.weighted_samples))
    kernels = build_lyapunov_kernels(kernel, eta0=2.0, etabar=1.0 / Q)

    A = kernel.samples
    steps = kernels.xi[:-1] - kernels.xi[1:]
    np.testing.assert_allclose(steps, 2.0 * 0.1 * 0.5 * (A[:-1] + A[1:]), rtol=1e-12, atol=1e-15)
    assert np.all(np.diff(kernels.xi) <= 0)
    assert kernels.kappa[0] == pytest.approx(1.0, abs=1e-12)
    assert kernels.kappa[-1] == 0.0
    mask = kernels.kappa != 0
    np.testing.assert_allclose(kernels.xi[mask] / kernels.kappa[mask], 2.0 * Q, rtol=1e-12)


def test_tail_integrals_spike():
    """Test a single interior spike gives positive tails only up to it"""
    samples = np.zeros(9)
    samples[3] = 1.0
    tails = tail_integrals(InfectivityKernel(samples=samples, delta=0.5, tau_bar=4.0))

    assert np.all(tails[:4] > 0)
    assert np.all(tails[4:] == 0)


def test_lyapunov_kernels_preconditions():
    """Test eta0 and etabar must be positive"""
    kernel = boxcar_kernel()
    with pytest.raises(PreconditionError):
        build_lyapunov_kernels(kernel, eta0=0.0)
    with pytest.raises(PreconditionError):
        build_lyapunov_kernels(kernel, eta0=1.0, etabar=-1.0)


def test_error_hierarchy():
    """Test error classes map onto the CLI exit categories"""
    error = ScenarioError("bad value", "kernel.height")

    assert str(error) == "kernel.height: bad value"
    assert error.field_path == "kernel.height"
    assert issubclass(KernelError, ScenarioError)
    assert isinstance(SimulationError("boom", t=1.5), NumericalError)
    assert str(SimulationError("boom", t=1.5)).startswith("t=1.5")
